#include "oscim/annealer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>

#include "oscim/rng.hpp"

namespace oscim {

DetuningSpec DetuningSpec::gaussian(double sigma) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("detuning sigma must be >= 0");
  return {Kind::gaussian, sigma};
}

Schedule default_annealing_schedule(double t_end) {
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be > 0");
  const double T = t_end;
  // Three stages: couple up while the phases are still analog and noisy,
  // then pump SYNC up slowly so the binary selection happens at full
  // coupling, then quench the noise for a clean readout.
  Profile coupling({{0.0, 0.0}, {0.3 * T, 12.0}});
  Profile sync({{0.3 * T, 0.0}, {0.9 * T, 2.0}});
  Profile noise({{0.0, 0.4}, {0.3 * T, 0.4}, {0.9 * T, 0.02}, {0.95 * T, 0.0}});
  return Schedule(std::move(coupling), std::move(sync), std::move(noise));
}

SolveConfig default_solve_config(std::uint64_t master_seed) {
  SolveConfig cfg;
  cfg.options.t_end = 100.0;
  cfg.options.dt = 0.0025;
  cfg.options.record_stride = 40;
  cfg.schedule = default_annealing_schedule(cfg.options.t_end);
  cfg.coupling = CouplingFunction::smooth_square(4.0);
  cfg.master_seed = master_seed;
  return cfg;
}

namespace {

Vector draw_detuning(const DetuningSpec& spec, int n, std::uint64_t seed) {
  Vector dw = Vector::Zero(n);
  if (spec.kind == DetuningSpec::Kind::gaussian && spec.sigma > 0.0) {
    for (int i = 0; i < n; ++i) {
      dw[i] = spec.sigma * rng::normal(seed, 0, static_cast<std::uint32_t>(i),
                                       rng::Stream::detuning);
    }
  }
  return dw;
}

template <typename Fn>
void run_pool(int jobs, int threads, Fn&& body) {
  int t = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  t = std::max(1, std::min(t, jobs));
  if (t == 1) {
    for (int k = 0; k < jobs; ++k) body(k);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(t));
  for (int w = 0; w < t; ++w) {
    pool.emplace_back([&] {
      for (int k = next.fetch_add(1); k < jobs; k = next.fetch_add(1)) body(k);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

SolveResult multi_run(const IsingProblem& problem, const SolveConfig& cfg,
                      const WeightedGraph* graph,
                      std::optional<double> oracle_energy) {
  if (cfg.runs < 1) throw std::invalid_argument("runs must be >= 1");
  if (graph && graph->order() != problem.size()) {
    throw std::invalid_argument("graph order must match problem size");
  }

  SolveResult result;
  result.reports.resize(static_cast<std::size_t>(cfg.runs));

  run_pool(cfg.runs, cfg.threads, [&](int r) {
    RunReport& report = result.reports[static_cast<std::size_t>(r)];
    report.run_index = r;
    report.seed = rng::derive_seed(cfg.master_seed, static_cast<std::uint64_t>(r));

    SimOptions options = cfg.options;
    options.seed = report.seed;
    const Vector detuning = draw_detuning(cfg.detuning, problem.size(), report.seed);
    try {
      SimResult sim =
          simulate(problem, cfg.schedule, cfg.coupling, detuning, options, graph);
      report.spins = sim.final_readout.spins;
      report.binarity = sim.final_readout.binarity;
      // Re-derive the scores from the spins so every report is internally
      // consistent with the problem data.
      report.energy = ising_energy(report.spins, problem);
      report.cut = graph ? cut_size(report.spins, *graph)
                         : std::numeric_limits<double>::quiet_NaN();
      report.trace = std::make_shared<Trace>(std::move(sim.trace));
    } catch (const IntegrationError&) {
      report.diverged = true;
    }
  });

  EnsembleStats& stats = result.stats;
  stats.runs = cfg.runs;
  stats.oracle_energy = oracle_energy;
  double sum_cut = 0.0, sum_energy = 0.0;
  int ok = 0, hits = 0;
  for (const RunReport& report : result.reports) {
    if (report.diverged) {
      ++stats.failed;
      continue;
    }
    if (ok == 0) {
      stats.best_cut = stats.worst_cut = report.cut;
      stats.best_energy = report.energy;
    }
    ++ok;
    sum_cut += report.cut;
    sum_energy += report.energy;
    stats.best_cut = std::max(stats.best_cut, report.cut);
    stats.worst_cut = std::min(stats.worst_cut, report.cut);
    stats.best_energy = std::min(stats.best_energy, report.energy);
    if (oracle_energy) {
      const double tol = 1e-9 * std::max(1.0, std::abs(*oracle_energy));
      if (report.energy <= *oracle_energy + tol) ++hits;
    }
  }
  if (ok > 0) {
    stats.mean_cut = sum_cut / ok;
    stats.mean_energy = sum_energy / ok;
    if (oracle_energy) stats.success_rate = static_cast<double>(hits) / ok;
  }
  return result;
}

WeightedGraph generate_network(NetworkKind kind, int n, WeightDist dist,
                               std::uint64_t seed, double p) {
  if (n < 2) throw std::invalid_argument("network needs at least two vertices");
  if (kind == NetworkKind::sparse && !(p > 0.0 && p <= 1.0)) {
    throw std::invalid_argument("sparse network needs 0 < p <= 1");
  }

  auto weight_at = [&](std::uint64_t pair_index) {
    const double u = rng::uniform(seed, pair_index, 1, rng::Stream::network);
    switch (dist) {
      case WeightDist::uniform01:
        return u;
      case WeightDist::uniform02:
        return 2.0 * u;
      case WeightDist::pm_one:
        return u < 0.5 ? -1.0 : 1.0;
    }
    return u;
  };

  std::vector<Edge> edges;
  if (kind == NetworkKind::line) {
    edges.reserve(static_cast<std::size_t>(n - 1));
    for (int i = 0; i + 1 < n; ++i) {
      const std::uint64_t q = static_cast<std::uint64_t>(i) * n + (i + 1);
      edges.push_back({i, i + 1, weight_at(q)});
    }
  } else {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const std::uint64_t q = static_cast<std::uint64_t>(i) * n + j;
        if (kind == NetworkKind::sparse &&
            rng::uniform(seed, q, 0, rng::Stream::network) >= p) {
          continue;
        }
        edges.push_back({i, j, weight_at(q)});
      }
    }
  }
  return WeightedGraph(n, std::move(edges));
}

std::vector<StudyRow> convergence_study(const std::vector<StudyPoint>& points,
                                        int samples_per_point,
                                        const SolveConfig& cfg) {
  if (samples_per_point < 1) throw std::invalid_argument("samples must be >= 1");
  if (!cfg.schedule.noise().always_zero()) {
    throw std::invalid_argument(
        "convergence_study needs a noise-free schedule for comparable settling times");
  }
  if (!(cfg.options.stop_tol > 0.0)) {
    throw std::invalid_argument("convergence_study needs stop_tol > 0");
  }

  const int jobs = static_cast<int>(points.size()) * samples_per_point;
  std::vector<StudyRow> rows(static_cast<std::size_t>(jobs));
  run_pool(jobs, cfg.threads, [&](int k) {
    const int pi = k / samples_per_point;
    const int sample = k % samples_per_point;
    const StudyPoint& pt = points[static_cast<std::size_t>(pi)];

    const std::uint64_t seed =
        rng::derive_seed(cfg.master_seed, static_cast<std::uint64_t>(k));
    const WeightedGraph g =
        generate_network(pt.kind, pt.n, WeightDist::uniform01, seed, pt.p);
    const IsingProblem problem = IsingProblem::from_graph(g);

    SimOptions options = cfg.options;
    options.seed = seed;
    const Vector detuning = Vector::Zero(pt.n);
    const SimResult sim =
        simulate(problem, cfg.schedule, cfg.coupling, detuning, options);

    StudyRow& row = rows[static_cast<std::size_t>(k)];
    row.kind = pt.kind;
    row.n = pt.n;
    row.sample = sample;
    row.settled = sim.early_stopped;
    row.settling_time = sim.early_stopped ? sim.final_state.time : cfg.options.t_end;
    row.final_energy = sim.trace.energy.back();
    row.times = sim.trace.times;
    row.normalized_energy = sim.trace.energy;
    const double scale = std::max(std::abs(row.final_energy), 1e-300);
    for (double& e : row.normalized_energy) e /= scale;
  });
  return rows;
}

LogicResult invertible_solve(const LogicProblem& lp,
                             const std::map<int, int>& clamps,
                             const SolveConfig& cfg) {
  std::vector<std::pair<int, int>> pins(clamps.begin(), clamps.end());
  const System sys = System::for_logic(lp.spin, cfg.coupling, pins);
  const SimResult sim = simulate(sys, cfg.schedule, cfg.options);

  LogicResult result;
  result.spins = sim.final_readout.spins;
  result.binarity = sim.final_readout.binarity;
  result.assignment = spin_to_binary(result.spins);
  result.penalty = qubo_energy(result.assignment, lp.qubo);
  result.valid = result.penalty <= lp.ground_value + 1e-9;
  return result;
}

const char* to_string(NetworkKind kind) {
  switch (kind) {
    case NetworkKind::full:
      return "full";
    case NetworkKind::sparse:
      return "sparse";
    case NetworkKind::line:
      return "line";
  }
  return "?";
}

const char* to_string(WeightDist dist) {
  switch (dist) {
    case WeightDist::uniform01:
      return "uniform01";
    case WeightDist::uniform02:
      return "uniform02";
    case WeightDist::pm_one:
      return "pm_one";
  }
  return "?";
}

nlohmann::json stats_to_json(const EnsembleStats& stats) {
  nlohmann::json j{{"runs", stats.runs},
                   {"failed", stats.failed},
                   {"mean_cut", stats.mean_cut},
                   {"best_cut", stats.best_cut},
                   {"worst_cut", stats.worst_cut},
                   {"mean_energy", stats.mean_energy},
                   {"best_energy", stats.best_energy}};
  if (stats.oracle_energy) j["oracle_energy"] = *stats.oracle_energy;
  if (stats.success_rate) j["success_rate"] = *stats.success_rate;
  return j;
}

void write_runs_csv(std::ostream& out, const std::vector<RunReport>& reports) {
  out << "run_index,seed,energy,cut,binarity,diverged\n";
  out.precision(17);
  for (const RunReport& r : reports) {
    out << r.run_index << ',' << r.seed << ',' << r.energy << ',' << r.cut << ','
        << r.binarity << ',' << (r.diverged ? 1 : 0) << '\n';
  }
}

void write_study_csv(std::ostream& out, const std::vector<StudyRow>& rows) {
  out << "kind,n,sample,settling_time,final_energy\n";
  out.precision(17);
  for (const StudyRow& r : rows) {
    out << to_string(r.kind) << ',' << r.n << ',' << r.sample << ','
        << r.settling_time << ',' << r.final_energy << '\n';
  }
}

}  // namespace oscim
