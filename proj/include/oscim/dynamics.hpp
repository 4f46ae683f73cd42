#pragma once

// Deterministic phase dynamics of the coupled oscillator network:
//
//   dphi_i/dt = dw_i + A_c * sum_j w_ij g(phi_i - phi_j) - A_s sin(2 phi_i)
//
// together with the matching energy
//
//   E = A_c * sum_{i<j} w_ij V(phi_i - phi_j)
//       - (A_s/2) * sum_i cos(2 phi_i) - sum_i dw_i phi_i
//
// so that dphi/dt = -grad E on every non-pinned coordinate. The last
// oscillator acts as the phase reference: it is pinned (zero rate, zero
// noise) and spins are read out relative to it.

#include <Eigen/Core>
#include <vector>

#include "oscim/coupling.hpp"
#include "oscim/ising.hpp"

namespace oscim {

struct PhaseState {
  Vector phases;
  double time = 0.0;
};

/// Instantaneous drive strengths (annealing schedules evaluate to these).
struct Drive {
  double coupling = 0.0;  // A_c
  double sync = 0.0;      // A_s
};

/// Time-invariant structure of an oscillator network. Immutable once built;
/// safe to share across threads.
class System {
 public:
  /// Direct constructor; the problem must be field-free (couplings only).
  System(IsingProblem problem, CouplingFunction coupling, Vector detuning,
         std::vector<bool> pinned, Vector pin_values);

  /// Network for an optimization problem: fields are folded into couplings to
  /// an appended reference oscillator, which is pinned at phase 0.
  /// `detuning` has one entry per original spin (reference gets zero).
  static System for_ising(const IsingProblem& problem,
                          CouplingFunction coupling, const Vector& detuning);

  /// As above but with selected logic variables clamped: their oscillators
  /// are pinned at phase 0 (logic 1) or pi (logic 0) and excluded from
  /// integration.
  static System for_logic(const IsingProblem& spin_problem,
                          CouplingFunction coupling,
                          const std::vector<std::pair<int, int>>& clamps);

  int size() const { return problem_.size(); }
  const IsingProblem& problem() const { return problem_; }
  const CouplingFunction& coupling() const { return coupling_; }
  const Vector& detuning() const { return detuning_; }
  const std::vector<bool>& pinned() const { return pinned_; }
  const Vector& pin_values() const { return pin_values_; }
  int free_count() const { return free_count_; }

 private:
  IsingProblem problem_;
  CouplingFunction coupling_;
  Vector detuning_;
  std::vector<bool> pinned_;
  Vector pin_values_;
  int free_count_ = 0;
};

/// Phase velocity; writes into `out` without allocating.
void rhs_into(const Vector& phases, const System& sys, const Drive& drive,
              Vector& out);
Vector rhs(const Vector& phases, const System& sys, const Drive& drive);

/// Energy that the deterministic flow descends.
double lyapunov(const Vector& phases, const System& sys, const Drive& drive);

struct Readout {
  SpinVector spins;      // one entry per non-reference oscillator
  double binarity = 1.0; // min_i |cos(phi_i - phi_ref)|; 1 = cleanly binary
};

/// Spins relative to the reference (last) oscillator: +1 where
/// cos(phi_i - phi_ref) >= 0, else -1.
Readout readout(const Vector& phases);

struct AdlerRoot {
  double phase_diff = 0.0;  // in [0, 2*pi)
  bool stable = false;
};

/// Steady phase offsets of an injection-locked oscillator:
/// roots of w0 - w1 + w0*A*sin(harmonic*d - input_phase) in [0, 2*pi),
/// classified by the sign of the linearization. Empty when the detuning
/// exceeds the locking range |w1 - w0| > w0*A.
std::vector<AdlerRoot> adler_steady_states(double w0, double w1, double strength,
                                           int harmonic,
                                           double input_phase = 0.0);

/// Wrap an angle into [0, 2*pi).
double wrap_angle(double x);

}  // namespace oscim
