#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oscim/coupling.hpp"

using namespace oscim;

namespace {
constexpr double kPi = 3.141592653589793238462643;

// Composite Simpson quadrature, the independent oracle for potential values.
template <typename F>
double simpson(F f, double a, double b, int intervals) {
  double acc = f(a) + f(b);
  for (int k = 1; k < intervals; ++k) {
    acc += f(a + (b - a) * k / intervals) * (k % 2 ? 4.0 : 2.0);
  }
  return acc * (b - a) / (3.0 * intervals);
}
}  // namespace

TEST_CASE("sinusoid coupling is sin/cos") {
  const CouplingFunction f = CouplingFunction::sinusoid();
  CHECK(f.g(kPi / 2) == doctest::Approx(1.0));
  CHECK(f.potential(0.0) == 1.0);
  CHECK(f.potential(kPi) == doctest::Approx(-1.0));
}

TEST_CASE("smooth square requires a positive shape parameter") {
  CHECK_THROWS_AS(CouplingFunction::smooth_square(0.0), std::invalid_argument);
  CHECK_THROWS_AS(CouplingFunction::smooth_square(-1.0), std::invalid_argument);
}

TEST_CASE("coupling terms are odd, periodic and unit-normalized") {
  for (const CouplingFunction& f :
       {CouplingFunction::sinusoid(), CouplingFunction::smooth_square(4.0),
        CouplingFunction::smooth_square(9.0)}) {
    CHECK(f.g(0.0) == 0.0);
    CHECK(f.g(kPi / 2) == doctest::Approx(1.0));
    for (double d : {0.3, 1.7, 2.9, 4.4, 6.0}) {
      CHECK(f.g(d) == doctest::Approx(-f.g(-d)).epsilon(1e-14));
      CHECK(f.g(d + 2 * kPi) == doctest::Approx(f.g(d)).epsilon(1e-12));
      CHECK(f.potential(d) == doctest::Approx(f.potential(-d)).epsilon(1e-9));
      CHECK(f.potential(d + 2 * kPi) ==
            doctest::Approx(f.potential(d)).epsilon(1e-9));
    }
  }
}

TEST_CASE("potential derivative cancels g on a dense grid") {
  // max over grid |V'(d) + g(d)| < 1e-6, V' by central differences.
  for (const CouplingFunction& f :
       {CouplingFunction::sinusoid(), CouplingFunction::smooth_square(4.0)}) {
    const double h = 1e-5;
    double worst = 0.0;
    const int grid = 4096;
    for (int k = 0; k < grid; ++k) {
      const double d = 2 * kPi * (k + 0.37) / grid;  // off-knot samples
      const double v_prime = (f.potential(d + h) - f.potential(d - h)) / (2 * h);
      worst = std::max(worst, std::abs(v_prime + f.g(d)));
    }
    CAPTURE(static_cast<int>(f.kind()));
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("smooth square approaches a clipped square wave for large rho") {
  const double rho = 24.0;
  const CouplingFunction f = CouplingFunction::smooth_square(rho);
  CHECK(f.g(kPi / 2) == doctest::Approx(1.0));
  CHECK(f.g(0.3) > 0.9);

  // V(pi) = 1 - integral_0^pi g; for the exact square wave that is 1 - pi.
  // The deviation equals the quadrature of |g - sign(sin)|, which on (0, pi)
  // is just 1 - g.
  const double v_pi_oracle =
      1.0 - simpson([&](double u) { return f.g(u); }, 0.0, kPi, 4096);
  CHECK(f.potential(kPi) == doctest::Approx(v_pi_oracle).epsilon(1e-9));
  const double gap =
      simpson([&](double u) { return 1.0 - f.g(u); }, 0.0, kPi, 8192);
  CHECK(std::abs(f.potential(kPi) - (1.0 - kPi)) ==
        doctest::Approx(gap).epsilon(1e-6));
  CHECK(std::abs(f.potential(kPi) - (1.0 - kPi)) <= gap + 1e-6);

  // Sharper shapes integrate closer to the triangle-wave limit.
  const CouplingFunction soft = CouplingFunction::smooth_square(2.0);
  CHECK(f.potential(kPi) < soft.potential(kPi));
  CHECK(soft.potential(kPi) < -1.0);  // already below the cosine value
}

TEST_CASE("small rho approaches the sinusoid") {
  const CouplingFunction f = CouplingFunction::smooth_square(0.01);
  for (double d : {0.1, 0.9, 2.2, 3.9, 5.5}) {
    CHECK(f.g(d) == doctest::Approx(std::sin(d)).epsilon(1e-4));
    CHECK(f.potential(d) == doctest::Approx(std::cos(d)).epsilon(1e-4));
  }
}

TEST_CASE("potential grid exports as CSV") {
  std::ostringstream out;
  CouplingFunction::smooth_square(4.0).write_potential_csv(out, 16);
  std::istringstream in(out.str());
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 17);  // header + 16 samples
}
