#include "oscim/sde.hpp"

#include <cmath>
#include <ostream>

#include "oscim/rng.hpp"

namespace oscim {

namespace {

constexpr double kPi = 3.141592653589793238462643;

void check_options(const SimOptions& o) {
  if (!(o.dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (!(o.t_end > 0.0)) throw std::invalid_argument("t_end must be > 0");
  if (o.dt > o.t_end) throw std::invalid_argument("dt must not exceed t_end");
  if (o.record_stride < 1) throw std::invalid_argument("record_stride must be >= 1");
  if (o.stop_tol < 0.0) throw std::invalid_argument("stop_tol must be >= 0");
}

Vector draw_initial_phases(const System& sys, const SimOptions& o) {
  const int n = sys.size();
  Vector phi(n);
  const double span = o.full_circle_init ? 2.0 * kPi : kPi;
  for (int i = 0; i < n; ++i) {
    phi[i] = sys.pinned()[i]
                 ? sys.pin_values()[i]
                 : span * rng::uniform(o.seed, 0, static_cast<std::uint32_t>(i),
                                       rng::Stream::init_phase);
  }
  return phi;
}

}  // namespace

PhaseState em_step(const PhaseState& state, const System& sys, const Drive& drive,
                   double dt, double noise_amp, const Vector& noise) {
  if (noise.size() != sys.size()) {
    throw std::invalid_argument("em_step: noise vector length mismatch");
  }
  Vector drift;
  rhs_into(state.phases, sys, drive, drift);
  PhaseState next;
  next.phases = state.phases + dt * drift;
  if (noise_amp != 0.0) {
    const double amp = noise_amp * std::sqrt(dt);
    for (int i = 0; i < sys.size(); ++i) {
      if (!sys.pinned()[i]) next.phases[i] += amp * noise[i];
    }
  }
  next.time = state.time + dt;
  if (!next.phases.allFinite()) {
    throw IntegrationError(static_cast<std::uint64_t>(state.time / dt), state.time);
  }
  return next;
}

SimResult simulate(const System& sys, const Schedule& schedule,
                   const SimOptions& options, const WeightedGraph* cut_graph,
                   const Vector* initial_phases) {
  check_options(options);
  const int n = sys.size();
  if (cut_graph && cut_graph->order() != n - 1) {
    throw std::invalid_argument("simulate: attached graph order must match spin count");
  }

  Vector phi =
      initial_phases ? *initial_phases : draw_initial_phases(sys, options);
  if (phi.size() != n) {
    throw std::invalid_argument("simulate: initial phase vector length mismatch");
  }

  const std::uint64_t steps =
      std::max<std::uint64_t>(1, static_cast<std::uint64_t>(
                                     std::llround(options.t_end / options.dt)));

  SimResult result;
  Trace& trace = result.trace;
  const std::uint64_t reserve = steps / options.record_stride + 2;
  trace.times.reserve(reserve);
  trace.energy.reserve(reserve);
  trace.binarity.reserve(reserve);
  if (cut_graph) trace.cut.reserve(reserve);
  std::vector<Vector> phase_rows;

  auto record = [&](double t, const Drive& drive) {
    trace.times.push_back(t);
    trace.energy.push_back(lyapunov(phi, sys, drive));
    const Readout r = readout(phi);
    trace.binarity.push_back(r.binarity);
    if (cut_graph) trace.cut.push_back(cut_size(r.spins, *cut_graph));
    if (options.record_phases) phase_rows.push_back(phi);
  };

  Vector drift(n);
  const double sqrt_dt = std::sqrt(options.dt);
  std::uint64_t step = 0;
  for (; step < steps; ++step) {
    const double t = static_cast<double>(step) * options.dt;
    const Schedule::Values v = schedule.at(t);
    const Drive drive{v.coupling, v.sync};
    rhs_into(phi, sys, drive, drift);

    if (step % static_cast<std::uint64_t>(options.record_stride) == 0) {
      record(t, drive);
    }

    if (v.noise == 0.0 && options.stop_tol > 0.0 &&
        drift.cwiseAbs().maxCoeff() < options.stop_tol) {
      result.early_stopped = true;
      break;
    }

    phi += options.dt * drift;
    if (v.noise != 0.0) {
      const double amp = v.noise * sqrt_dt;
      for (int i = 0; i < n; ++i) {
        if (!sys.pinned()[i]) {
          phi[i] += amp * rng::normal(options.seed, step,
                                      static_cast<std::uint32_t>(i),
                                      rng::Stream::noise);
        }
      }
    }
    if (!phi.allFinite()) {
      throw IntegrationError(step, t);
    }
  }

  const double t_final = static_cast<double>(step) * options.dt;
  if (trace.times.empty() || trace.times.back() != t_final) {
    const Schedule::Values v = schedule.at(t_final);
    record(t_final, Drive{v.coupling, v.sync});
  }
  if (options.record_phases && !phase_rows.empty()) {
    trace.phases.resize(static_cast<Eigen::Index>(phase_rows.size()), n);
    for (std::size_t r = 0; r < phase_rows.size(); ++r) {
      trace.phases.row(static_cast<Eigen::Index>(r)) = phase_rows[r];
    }
  }

  result.final_state = PhaseState{std::move(phi), t_final};
  result.final_readout = readout(result.final_state.phases);
  result.steps = step;
  return result;
}

SimResult simulate(const IsingProblem& problem, const Schedule& schedule,
                   const CouplingFunction& coupling, const Vector& detuning,
                   const SimOptions& options, const WeightedGraph* cut_graph) {
  return simulate(System::for_ising(problem, coupling, detuning), schedule,
                  options, cut_graph);
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << "time,energy,cut,binarity\n";
  const bool has_cut = !trace.cut.empty();
  out.precision(17);
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    out << trace.times[k] << ',' << trace.energy[k] << ',';
    if (has_cut) out << trace.cut[k];
    out << ',' << trace.binarity[k] << '\n';
  }
}

void write_phases_csv(std::ostream& out, const Trace& trace) {
  out.precision(17);
  for (Eigen::Index r = 0; r < trace.phases.rows(); ++r) {
    out << trace.times[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < trace.phases.cols(); ++c) {
      out << ',' << trace.phases(r, c);
    }
    out << '\n';
  }
}

}  // namespace oscim
