#include "oscim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oscim {

namespace {
constexpr double kTwoPi = 6.283185307179586476925287;
constexpr double kPi = 3.141592653589793238462643;
}  // namespace

double wrap_angle(double x) {
  double t = x - kTwoPi * std::floor(x / kTwoPi);
  if (t >= kTwoPi) t = 0.0;
  return t;
}

System::System(IsingProblem problem, CouplingFunction coupling, Vector detuning,
               std::vector<bool> pinned, Vector pin_values)
    : problem_(std::move(problem)),
      coupling_(std::move(coupling)),
      detuning_(std::move(detuning)),
      pinned_(std::move(pinned)),
      pin_values_(std::move(pin_values)) {
  const int n = problem_.size();
  if (!problem_.field_free()) {
    throw std::invalid_argument("System: fields must be folded in (homogenize first)");
  }
  if (detuning_.size() != n || static_cast<int>(pinned_.size()) != n ||
      pin_values_.size() != n) {
    throw std::invalid_argument("System: detuning/pin arrays must match problem size");
  }
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(detuning_[i])) {
      throw std::invalid_argument("System: detuning must be finite");
    }
    if (pinned_[i] && detuning_[i] != 0.0) {
      throw std::invalid_argument("System: pinned oscillators cannot be detuned");
    }
  }
  free_count_ = 0;
  for (int i = 0; i < n; ++i) {
    if (!pinned_[i]) ++free_count_;
  }
}

System System::for_ising(const IsingProblem& problem, CouplingFunction coupling,
                         const Vector& detuning) {
  if (detuning.size() != problem.size()) {
    throw std::invalid_argument("detuning length must equal the spin count");
  }
  IsingProblem h = homogenize(problem);
  const int n = h.size();
  Vector dw = Vector::Zero(n);
  dw.head(n - 1) = detuning;
  std::vector<bool> pinned(n, false);
  pinned[n - 1] = true;
  return System(std::move(h), std::move(coupling), std::move(dw),
                std::move(pinned), Vector::Zero(n));
}

System System::for_logic(const IsingProblem& spin_problem,
                         CouplingFunction coupling,
                         const std::vector<std::pair<int, int>>& clamps) {
  IsingProblem h = homogenize(spin_problem);
  const int n = h.size();
  std::vector<bool> pinned(n, false);
  Vector pin_values = Vector::Zero(n);
  pinned[n - 1] = true;
  for (const auto& [idx, bit] : clamps) {
    if (idx < 0 || idx >= spin_problem.size()) {
      throw std::invalid_argument("clamp index " + std::to_string(idx) +
                                  " out of range");
    }
    if (bit != 0 && bit != 1) {
      throw std::invalid_argument("clamp value must be 0 or 1");
    }
    pinned[idx] = true;
    pin_values[idx] = bit == 1 ? 0.0 : kPi;
  }
  return System(std::move(h), std::move(coupling), Vector::Zero(n),
                std::move(pinned), std::move(pin_values));
}

void rhs_into(const Vector& phases, const System& sys, const Drive& drive,
              Vector& out) {
  const int n = sys.size();
  if (phases.size() != n) {
    throw std::invalid_argument("rhs: phase vector length mismatch");
  }
  out.setZero(n);
  const CouplingFunction& cf = sys.coupling();
  // Pairwise contributions accumulate in coupling order to keep results
  // bit-reproducible.
  for (const Edge& e : sys.problem().couplings()) {
    const double ge = cf.g(phases[e.i] - phases[e.j]);
    out[e.i] += e.w * ge;
    out[e.j] -= e.w * ge;
  }
  out = sys.detuning().array() + drive.coupling * out.array() -
        drive.sync * (2.0 * phases.array()).sin();
  for (int i = 0; i < n; ++i) {
    if (sys.pinned()[i]) out[i] = 0.0;
  }
}

Vector rhs(const Vector& phases, const System& sys, const Drive& drive) {
  Vector out;
  rhs_into(phases, sys, drive, out);
  return out;
}

double lyapunov(const Vector& phases, const System& sys, const Drive& drive) {
  const int n = sys.size();
  if (phases.size() != n) {
    throw std::invalid_argument("lyapunov: phase vector length mismatch");
  }
  const CouplingFunction& cf = sys.coupling();
  double pair_sum = 0.0;
  for (const Edge& e : sys.problem().couplings()) {
    pair_sum += e.w * cf.potential(phases[e.i] - phases[e.j]);
  }
  const double sync_sum = (2.0 * phases.array()).cos().sum();
  return drive.coupling * pair_sum - 0.5 * drive.sync * sync_sum -
         sys.detuning().dot(phases);
}

Readout readout(const Vector& phases) {
  const int n = static_cast<int>(phases.size());
  if (n < 1) throw std::invalid_argument("readout: empty phase vector");
  Readout r;
  r.spins.resize(n - 1);
  r.binarity = 1.0;
  const double ref = phases[n - 1];
  for (int i = 0; i < n - 1; ++i) {
    const double c = std::cos(phases[i] - ref);
    r.spins[i] = c >= 0.0 ? 1 : -1;
    r.binarity = std::min(r.binarity, std::abs(c));
  }
  return r;
}

std::vector<AdlerRoot> adler_steady_states(double w0, double w1, double strength,
                                           int harmonic, double input_phase) {
  if (!(w0 > 0.0) || !(w1 > 0.0) || !(strength > 0.0)) {
    throw std::invalid_argument("adler_steady_states: w0, w1, strength must be > 0");
  }
  if (harmonic != 1 && harmonic != 2) {
    throw std::invalid_argument("adler_steady_states: harmonic must be 1 or 2");
  }

  const double r = (w1 - w0) / (w0 * strength);
  std::vector<AdlerRoot> roots;
  if (std::abs(r) > 1.0) return roots;  // no lock

  const double theta1 = std::asin(std::clamp(r, -1.0, 1.0));
  const double theta2 = kPi - theta1;
  const bool tangent = std::abs(std::cos(theta1)) < 1e-15;

  for (const double theta : {theta1, theta2}) {
    // phase_diff solves harmonic*d - input_phase = theta (mod 2*pi); one root
    // per winding of the harmonic.
    const bool stable = !tangent && std::cos(theta) < 0.0;
    for (int k = 0; k < harmonic; ++k) {
      const double d = wrap_angle((theta + input_phase + kTwoPi * k) / harmonic);
      roots.push_back({d, stable});
    }
    if (tangent) break;  // both branches coincide
  }
  std::sort(roots.begin(), roots.end(),
            [](const AdlerRoot& a, const AdlerRoot& b) {
              return a.phase_diff < b.phase_diff;
            });
  return roots;
}

}  // namespace oscim
