#include "oscim/coupling.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace oscim {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

// Cyclic tridiagonal solve (Thomas + Sherman-Morrison) for the spline's
// second derivatives: (1/6) M_{i-1} + (2/3) M_i + (1/6) M_{i+1} = d_i.
std::vector<double> solve_cyclic(const std::vector<double>& d) {
  const std::size_t n = d.size();
  const double a = 1.0 / 6.0, b = 2.0 / 3.0, c = 1.0 / 6.0;

  auto tridiag = [&](const std::vector<double>& rhs, double b0,
                     double bn) -> std::vector<double> {
    std::vector<double> cp(n), x(n);
    double beta = b0;
    x[0] = rhs[0] / beta;
    for (std::size_t i = 1; i < n; ++i) {
      cp[i - 1] = c / beta;
      beta = (i + 1 == n ? bn : b) - a * cp[i - 1];
      x[i] = (rhs[i] - a * x[i - 1]) / beta;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= cp[i] * x[i + 1];
    return x;
  };

  // Rank-one correction for the wrap-around entries.
  const double gamma = -b;
  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = c;
  std::vector<double> rhs = d;

  const double b0 = b - gamma;
  const double bn = b - a * c / gamma;
  std::vector<double> y = tridiag(rhs, b0, bn);
  std::vector<double> z = tridiag(u, b0, bn);

  const double fact = (y[0] + a / gamma * y[n - 1]) /
                      (1.0 + z[0] + a / gamma * z[n - 1]);
  std::vector<double> m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = y[i] - fact * z[i];
  return m;
}

}  // namespace

PeriodicSpline::PeriodicSpline(std::vector<double> values)
    : values_(std::move(values)) {
  const std::size_t n = values_.size();
  if (n < 4) throw std::invalid_argument("periodic spline needs >= 4 points");
  step_ = kTwoPi / static_cast<double>(n);

  std::vector<double> d(n);
  const double inv_h2 = 1.0 / (step_ * step_);
  for (std::size_t i = 0; i < n; ++i) {
    const double prev = values_[(i + n - 1) % n];
    const double next = values_[(i + 1) % n];
    d[i] = (prev - 2.0 * values_[i] + next) * inv_h2;
  }
  second_ = solve_cyclic(d);
}

double PeriodicSpline::operator()(double x) const {
  const std::size_t n = values_.size();
  double t = x - kTwoPi * std::floor(x / kTwoPi);
  if (t >= kTwoPi) t = 0.0;
  std::size_t i = static_cast<std::size_t>(t / step_);
  if (i >= n) i = n - 1;
  const std::size_t j = (i + 1) % n;
  const double u = t - static_cast<double>(i) * step_;
  const double v = step_ - u;
  const double h = step_;
  return (second_[i] * v * v * v + second_[j] * u * u * u) / (6.0 * h) +
         (values_[i] / h - second_[i] * h / 6.0) * v +
         (values_[j] / h - second_[j] * h / 6.0) * u;
}

CouplingFunction CouplingFunction::sinusoid() {
  CouplingFunction f;
  f.kind_ = Kind::sinusoid;
  return f;
}

CouplingFunction CouplingFunction::smooth_square(double rho) {
  if (!(rho > 0.0)) {
    throw std::invalid_argument("smooth_square coupling requires rho > 0");
  }
  CouplingFunction f;
  f.kind_ = Kind::smooth_square;
  f.rho_ = rho;
  f.inv_tanh_rho_ = 1.0 / std::tanh(rho);

  // Antiderivative of -g on the grid via the trapezoid-exact Fourier route:
  // g is odd and smooth, so g = sum_k b_k sin(k d) with spectrally accurate
  // b_k from plain sums over the same grid, and V = C + sum_k (b_k/k) cos(k d)
  // with C fixing V(0) = 1. Grid values are then accurate to roundoff, which
  // the spline needs in order to reproduce V' = -g to ~1e-8.
  const int n = kGridPoints;
  std::vector<double> gv(n), sin_table(n);
  for (int i = 0; i < n; ++i) {
    const double d = kTwoPi * i / n;
    sin_table[i] = std::sin(d);
    gv[i] = std::tanh(rho * sin_table[i]) * f.inv_tanh_rho_;
  }

  const int max_harmonic = n / 2 - 1;
  std::vector<double> coeff;
  coeff.reserve(256);
  int quiet = 0;
  for (int k = 1; k <= max_harmonic; ++k) {
    double bk = 0.0;
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i) {
      bk += gv[i] * sin_table[idx];
      idx += k;
      if (idx >= static_cast<std::size_t>(n)) idx -= n;
    }
    bk *= 2.0 / n;
    coeff.push_back(bk);
    quiet = std::abs(bk) < 1e-17 ? quiet + 1 : 0;
    if (quiet >= 8) break;
  }

  double c0 = 1.0;
  for (std::size_t k = 0; k < coeff.size(); ++k) {
    c0 -= coeff[k] / static_cast<double>(k + 1);
  }
  std::vector<double> values(n);
  for (int i = 0; i < n; ++i) {
    double v = c0;
    std::size_t idx = 0;
    for (std::size_t k = 0; k < coeff.size(); ++k) {
      idx += i;
      while (idx >= static_cast<std::size_t>(n)) idx -= n;
      // cos(x) = sin(x + pi/2): reuse the sine table with a quarter shift.
      const std::size_t q = (idx + n / 4) % n;
      v += coeff[k] / static_cast<double>(k + 1) * sin_table[q];
    }
    values[i] = v;
  }
  f.potential_ = PeriodicSpline(std::move(values));
  return f;
}

double CouplingFunction::g(double delta) const {
  if (kind_ == Kind::sinusoid) return std::sin(delta);
  return std::tanh(rho_ * std::sin(delta)) * inv_tanh_rho_;
}

double CouplingFunction::potential(double delta) const {
  if (kind_ == Kind::sinusoid) return std::cos(delta);
  return potential_(delta);
}

void CouplingFunction::write_potential_csv(std::ostream& out, int points) const {
  out << "delta,g,potential\n";
  for (int i = 0; i < points; ++i) {
    const double d = kTwoPi * i / points;
    out << d << ',' << g(d) << ',' << potential(d) << '\n';
  }
}

CouplingFunction make_coupling(CouplingFunction::Kind kind, double rho) {
  if (kind == CouplingFunction::Kind::sinusoid) return CouplingFunction::sinusoid();
  return CouplingFunction::smooth_square(rho);
}

}  // namespace oscim
