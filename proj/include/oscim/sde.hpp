#pragma once

// Euler-Maruyama integration of the noisy phase dynamics
//
//   d phi = rhs(phi, t) dt + A_n dW
//
// with annealing schedules, deterministic counter-based noise and decimated
// trace capture. Results are bit-reproducible for a fixed seed.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "oscim/dynamics.hpp"
#include "oscim/schedule.hpp"

namespace oscim {

struct SimOptions {
  double dt = 0.01;
  double t_end = 50.0;
  std::uint64_t seed = 0;
  int record_stride = 1;
  /// Early-stop threshold on max |dphi/dt|; 0 disables. Only consulted while
  /// the noise amplitude is exactly zero.
  double stop_tol = 0.0;
  bool record_phases = false;
  /// Initial phases are uniform on [0, pi); set to widen to [0, 2*pi).
  bool full_circle_init = false;
};

struct Trace {
  std::vector<double> times;
  std::vector<double> energy;
  std::vector<double> cut;       // populated when a graph is attached
  std::vector<double> binarity;
  Matrix phases;  // one row per snapshot when requested, else 0 x 0
};

struct SimResult {
  Trace trace;
  PhaseState final_state;
  Readout final_readout;
  std::uint64_t steps = 0;
  bool early_stopped = false;
};

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(std::uint64_t step, double time)
      : std::runtime_error("phase diverged (non-finite) at step " +
                           std::to_string(step) + ", t=" + std::to_string(time)),
        step_(step) {}
  std::uint64_t step() const { return step_; }

 private:
  std::uint64_t step_;
};

/// One explicit step phi' = phi + rhs*dt + noise_amp*sqrt(dt)*noise. Pinned
/// oscillators receive neither drift nor noise. Throws IntegrationError if
/// the update leaves the finite range.
PhaseState em_step(const PhaseState& state, const System& sys, const Drive& drive,
                   double dt, double noise_amp, const Vector& noise);

/// Integrate over [0, t_end] with initial phases drawn uniformly from the
/// configured range (pinned oscillators start at their pin value). Noise
/// draws are keyed on (seed, step, oscillator), so traces are identical
/// regardless of how runs are scheduled.
SimResult simulate(const System& sys, const Schedule& schedule,
                   const SimOptions& options,
                   const WeightedGraph* cut_graph = nullptr,
                   const Vector* initial_phases = nullptr);

/// Convenience wrapper: homogenizes the problem, appends and pins the
/// reference oscillator.
SimResult simulate(const IsingProblem& problem, const Schedule& schedule,
                   const CouplingFunction& coupling, const Vector& detuning,
                   const SimOptions& options,
                   const WeightedGraph* cut_graph = nullptr);

/// Boltzmann-law temperature equivalent of a noise amplitude: kT = A_n^2 / 2.
inline double effective_temperature(double noise_amp) {
  return 0.5 * noise_amp * noise_amp;
}

/// CSV dump (time, energy, cut, binarity).
void write_trace_csv(std::ostream& out, const Trace& trace);
/// CSV dump of recorded phase snapshots (one row per time).
void write_phases_csv(std::ostream& out, const Trace& trace);

}  // namespace oscim
