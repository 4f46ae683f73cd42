// Command-line front end: anneal MAX-CUT instances, run invertible-logic
// queries, convergence studies and injection-locking analysis.
//
// Exit codes: 0 success, 2 input/usage error, 3 every run diverged.

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

#include "oscim/annealer.hpp"
#include "oscim/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace oscim;

namespace {

struct CliConfig {
  int runs = 100;
  std::uint64_t seed = 0;
  double dt = 0.0025;
  double t_end = 100.0;
  int record_stride = 40;
  double stop_tol = 0.0;
  std::string coupling = "square";  // sin | square
  double rho = 4.0;
  double detune_sigma = 0.0;
  bool oracle = false;
  int threads = 0;
  std::string out_dir = "out";
  bool emit_traces = false;
  bool emit_phases = false;
  bool full_circle_init = false;
  std::optional<Schedule> schedule;  // default derived from t_end when absent

  static const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "runs",       "seed",        "dt",          "t_end",
        "record_stride", "stop_tol", "coupling",    "rho",
        "detune_sigma", "oracle",    "threads",     "out",
        "emit_traces", "emit_phases", "full_circle_init", "schedule"};
    return keys;
  }

  void load(const json& j) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!known_keys().count(it.key())) {
        throw std::invalid_argument("unknown config key '" + it.key() + "'");
      }
    }
    if (j.contains("runs")) runs = j.at("runs").get<int>();
    if (j.contains("seed")) seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("dt")) dt = j.at("dt").get<double>();
    if (j.contains("t_end")) t_end = j.at("t_end").get<double>();
    if (j.contains("record_stride")) record_stride = j.at("record_stride").get<int>();
    if (j.contains("stop_tol")) stop_tol = j.at("stop_tol").get<double>();
    if (j.contains("coupling")) coupling = j.at("coupling").get<std::string>();
    if (j.contains("rho")) rho = j.at("rho").get<double>();
    if (j.contains("detune_sigma")) detune_sigma = j.at("detune_sigma").get<double>();
    if (j.contains("oracle")) oracle = j.at("oracle").get<bool>();
    if (j.contains("threads")) threads = j.at("threads").get<int>();
    if (j.contains("out")) out_dir = j.at("out").get<std::string>();
    if (j.contains("emit_traces")) emit_traces = j.at("emit_traces").get<bool>();
    if (j.contains("emit_phases")) emit_phases = j.at("emit_phases").get<bool>();
    if (j.contains("full_circle_init")) {
      full_circle_init = j.at("full_circle_init").get<bool>();
    }
    if (j.contains("schedule")) schedule = Schedule::from_json(j.at("schedule"));
  }

  json dump() const {
    json j{{"runs", runs},
           {"seed", seed},
           {"dt", dt},
           {"t_end", t_end},
           {"record_stride", record_stride},
           {"stop_tol", stop_tol},
           {"coupling", coupling},
           {"rho", rho},
           {"detune_sigma", detune_sigma},
           {"oracle", oracle},
           {"threads", threads},
           {"out", out_dir},
           {"emit_traces", emit_traces},
           {"emit_phases", emit_phases},
           {"full_circle_init", full_circle_init}};
    j["schedule"] = effective_schedule().to_json();
    return j;
  }

  Schedule effective_schedule() const {
    return schedule ? *schedule : default_annealing_schedule(t_end);
  }

  SolveConfig to_solve_config() const {
    if (coupling != "sin" && coupling != "square") {
      throw std::invalid_argument("coupling must be 'sin' or 'square'");
    }
    SolveConfig cfg;
    cfg.schedule = effective_schedule();
    cfg.options.dt = dt;
    cfg.options.t_end = t_end;
    cfg.options.record_stride = record_stride;
    cfg.options.stop_tol = stop_tol;
    cfg.options.full_circle_init = full_circle_init;
    cfg.runs = runs;
    cfg.master_seed = seed;
    cfg.coupling = coupling == "sin" ? CouplingFunction::sinusoid()
                                     : CouplingFunction::smooth_square(rho);
    cfg.detuning = detune_sigma > 0.0 ? DetuningSpec::gaussian(detune_sigma)
                                      : DetuningSpec::none();
    cfg.threads = threads;
    return cfg;
  }
};

void add_common_flags(CLI::App* cmd, CliConfig& cfg, std::string& config_path,
                      bool& dump_config) {
  cmd->add_option("--config", config_path, "JSON config file (flags override it)");
  cmd->add_flag("--dump-config", dump_config,
                "print the effective config as JSON and exit");
  cmd->add_option("--runs", cfg.runs, "number of independent runs");
  cmd->add_option("--seed", cfg.seed, "master seed");
  cmd->add_option("--dt", cfg.dt, "integration step");
  cmd->add_option("--t-end", cfg.t_end, "simulation horizon");
  cmd->add_option("--record-stride", cfg.record_stride, "trace decimation");
  cmd->add_option("--stop-tol", cfg.stop_tol,
                  "early-stop threshold on max |dphi/dt| (noise-free only)");
  cmd->add_option("--coupling", cfg.coupling, "coupling shape: sin | square")
      ->check(CLI::IsMember({"sin", "square"}));
  cmd->add_option("--rho", cfg.rho, "smooth-square shape parameter");
  cmd->add_option("--detune-sigma", cfg.detune_sigma,
                  "std dev of Gaussian frequency variation");
  cmd->add_option("--threads", cfg.threads, "worker pool cap (0 = hardware)");
  cmd->add_option("--out", cfg.out_dir, "output directory");
}

CliConfig resolve_config(const CLI::App* cmd, CliConfig flag_values,
                         const std::string& config_path) {
  CliConfig cfg;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw std::invalid_argument("cannot open config '" + config_path + "'");
    json j;
    in >> j;
    cfg.load(j);
  }
  // Flags override file values only when the user actually passed them.
  auto passed = [&](const char* name) { return cmd->count(name) > 0; };
  if (passed("--runs")) cfg.runs = flag_values.runs;
  if (passed("--seed")) cfg.seed = flag_values.seed;
  if (passed("--dt")) cfg.dt = flag_values.dt;
  if (passed("--t-end")) {
    cfg.t_end = flag_values.t_end;
    if (!cfg.schedule) cfg.schedule.reset();  // re-derive from the new horizon
  }
  if (passed("--record-stride")) cfg.record_stride = flag_values.record_stride;
  if (passed("--stop-tol")) cfg.stop_tol = flag_values.stop_tol;
  if (passed("--coupling")) cfg.coupling = flag_values.coupling;
  if (passed("--rho")) cfg.rho = flag_values.rho;
  if (passed("--detune-sigma")) cfg.detune_sigma = flag_values.detune_sigma;
  if (passed("--threads")) cfg.threads = flag_values.threads;
  if (passed("--out")) cfg.out_dir = flag_values.out_dir;
  return cfg;
}

int cmd_solve(const std::string& path, const CliConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const GsetData data = load_gset(path);
  if (data.duplicates > 0) {
    std::cerr << "warning: " << data.duplicates
              << " duplicate pairs replaced (last occurrence wins)\n";
  }
  const WeightedGraph& g = data.graph;
  const IsingProblem problem = IsingProblem::from_graph(g);

  SolveConfig solve_cfg = cfg.to_solve_config();
  solve_cfg.options.record_phases = cfg.emit_phases;

  std::optional<double> oracle_energy;
  if (cfg.oracle) {
    if (problem.size() > 24) {
      throw std::invalid_argument("--oracle needs n <= 24");
    }
    oracle_energy = brute_force_ground(problem).energy;
  }

  const SolveResult res = multi_run(problem, solve_cfg, &g, oracle_energy);
  if (res.stats.failed == res.stats.runs) {
    std::cerr << "error: all runs diverged\n";
    return 3;
  }

  fs::create_directories(cfg.out_dir);
  const auto wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  // The config echo describes the experiment, not where or how wide it ran;
  // thread count and output paths live under "timing" so reruns compare equal.
  json cfg_echo = cfg.dump();
  cfg_echo.erase("threads");
  cfg_echo.erase("out");
  json stats{{"problem",
              {{"path", path},
               {"n", g.order()},
               {"m", g.edges().size()},
               {"duplicates", data.duplicates},
               {"total_weight", g.total_weight()}}},
             {"config", cfg_echo},
             {"stats", stats_to_json(res.stats)},
             {"timing", {{"wall_seconds", wall}, {"threads", solve_cfg.threads}}}};
  std::ofstream(fs::path(cfg.out_dir) / "stats.json") << stats.dump(2) << '\n';

  std::ofstream runs_csv(fs::path(cfg.out_dir) / "runs.csv");
  write_runs_csv(runs_csv, res.reports);

  if (cfg.emit_traces || cfg.emit_phases) {
    const fs::path dir = fs::path(cfg.out_dir) / "traces";
    fs::create_directories(dir);
    for (const RunReport& r : res.reports) {
      if (!r.trace) continue;
      const std::string tag = std::to_string(r.run_index);
      if (cfg.emit_traces) {
        std::ofstream tf(dir / ("run_" + tag + ".csv"));
        write_trace_csv(tf, *r.trace);
      }
      if (cfg.emit_phases) {
        std::ofstream pf(dir / ("phases_" + tag + ".csv"));
        write_phases_csv(pf, *r.trace);
      }
    }
  }

  std::cout << "runs: " << res.stats.runs - res.stats.failed << '/' << res.stats.runs
            << "  mean cut: " << res.stats.mean_cut
            << "  best cut: " << res.stats.best_cut << '\n';
  if (res.stats.success_rate) {
    std::cout << "oracle optimum: " << *res.stats.oracle_energy
              << "  success rate: " << *res.stats.success_rate << '\n';
  }
  return 0;
}

int cmd_adder(const std::string& clamp_spec, const CliConfig& cfg) {
  const LogicProblem lp = encode_half_adder();
  std::map<int, int> clamps;
  std::stringstream ss(clamp_spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("clamp '" + item + "' is not of the form var=bit");
    }
    const std::string name = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    const auto it = std::find(lp.names.begin(), lp.names.end(), name);
    if (it == lp.names.end()) {
      throw std::invalid_argument("unknown variable '" + name + "' (use c,s,a,b)");
    }
    if (value != "0" && value != "1") {
      throw std::invalid_argument("clamp value for '" + name + "' must be 0 or 1");
    }
    clamps[static_cast<int>(it - lp.names.begin())] = value == "1" ? 1 : 0;
  }

  SolveConfig solve_cfg = cfg.to_solve_config();
  const LogicResult r = invertible_solve(lp, clamps, solve_cfg);
  for (std::size_t k = 0; k < lp.names.size(); ++k) {
    std::cout << lp.names[k] << '=' << r.assignment[static_cast<int>(k)];
    std::cout << (k + 1 < lp.names.size() ? ' ' : '\n');
  }
  std::cout << "valid=" << (r.valid ? "yes" : "no") << " penalty=" << r.penalty
            << " binarity=" << r.binarity << '\n';
  return 0;
}

int cmd_study(const std::string& kind_name, const std::vector<int>& sizes,
              int samples, double p, const CliConfig& cfg) {
  NetworkKind kind;
  if (kind_name == "full") {
    kind = NetworkKind::full;
  } else if (kind_name == "sparse") {
    kind = NetworkKind::sparse;
  } else if (kind_name == "line") {
    kind = NetworkKind::line;
  } else {
    throw std::invalid_argument("kind must be full, sparse or line");
  }

  SolveConfig solve_cfg = cfg.to_solve_config();
  if (!solve_cfg.schedule.noise().always_zero()) {
    // Settling times need the noise-free flow; use flat drives unless the
    // user supplied an explicit schedule.
    solve_cfg.schedule = Schedule(Profile::constant(1.0), Profile::constant(2.0),
                                  Profile::constant(0.0));
  }
  if (!(solve_cfg.options.stop_tol > 0.0)) solve_cfg.options.stop_tol = 1e-3;

  std::vector<StudyPoint> points;
  for (int n : sizes) points.push_back({kind, n, p});
  const auto rows = convergence_study(points, samples, solve_cfg);

  fs::create_directories(cfg.out_dir);
  const fs::path out = fs::path(cfg.out_dir) / "study.csv";
  std::ofstream f(out);
  write_study_csv(f, rows);
  write_study_csv(std::cout, rows);

  if (cfg.emit_traces) {
    const fs::path dir = fs::path(cfg.out_dir) / "traces";
    fs::create_directories(dir);
    for (const StudyRow& row : rows) {
      std::ofstream tf(dir / (std::string(to_string(row.kind)) + "_n" +
                              std::to_string(row.n) + "_s" +
                              std::to_string(row.sample) + ".csv"));
      tf << "time,normalized_energy\n";
      tf.precision(17);
      for (std::size_t k = 0; k < row.times.size(); ++k) {
        tf << row.times[k] << ',' << row.normalized_energy[k] << '\n';
      }
    }
  }
  return 0;
}

int cmd_adler(double w0, double w1, double strength, int harmonic, double offset) {
  const auto roots = adler_steady_states(w0, w1, strength, harmonic, offset);
  if (roots.empty()) {
    std::cout << "no lock: |w1 - w0| exceeds w0 * strength\n";
    return 0;
  }
  std::cout << "phase_diff,stable\n";
  for (const auto& r : roots) {
    std::cout << r.phase_diff << ',' << (r.stable ? 1 : 0) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupled-oscillator annealer for Ising and MAX-CUT problems"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(oscim::kVersion));

  CliConfig flags;
  std::string config_path;
  bool dump_config = false;

  auto* solve = app.add_subcommand("solve", "anneal a MAX-CUT instance (G-set format)");
  std::string gset_path;
  solve->add_option("input", gset_path, "problem file")->required();
  add_common_flags(solve, flags, config_path, dump_config);
  solve->add_flag("--oracle", flags.oracle,
                  "compare against brute-force optimum (n <= 24)");
  solve->add_flag("--emit-traces", flags.emit_traces, "write per-run energy CSVs");
  solve->add_flag("--emit-phases", flags.emit_phases, "record phase snapshots");

  auto* adder = app.add_subcommand("adder", "invertible half adder (a + b = 2c + s)");
  std::string clamp_spec;
  adder->add_option("--clamp", clamp_spec, "e.g. \"a=1,b=1\" or \"s=1\"");
  add_common_flags(adder, flags, config_path, dump_config);

  auto* study = app.add_subcommand("study", "convergence scaling study");
  std::string kind = "full";
  std::vector<int> sizes = {10, 50, 100};
  int samples = 10;
  double sparse_p = 0.1;
  study->add_option("--kind", kind, "network kind: full | sparse | line");
  study->add_option("--sizes", sizes, "network sizes")->delimiter(',');
  study->add_option("--samples", samples, "samples per size");
  study->add_option("--p", sparse_p, "keep probability for sparse networks");
  study->add_flag("--emit-traces", flags.emit_traces,
                  "write normalized energy traces per sample");
  add_common_flags(study, flags, config_path, dump_config);

  auto* adler = app.add_subcommand("adler", "injection-locking steady states");
  double w0 = 1.0, w1 = 1.0, strength = 0.1, offset = 0.0;
  int harmonic = 1;
  adler->add_option("--w0", w0, "oscillator natural frequency");
  adler->add_option("--w1", w1, "input frequency");
  adler->add_option("--strength", strength, "normalized lock strength");
  adler->add_option("--harmonic", harmonic, "1 or 2");
  adler->add_option("--offset", offset, "input phase offset");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return 2;
  }

  try {
    CLI::App* cmd = app.get_subcommands().front();
    if (cmd == adler) return cmd_adler(w0, w1, strength, harmonic, offset);

    CliConfig cfg = resolve_config(cmd, flags, config_path);
    cfg.oracle = flags.oracle;
    cfg.emit_traces = flags.emit_traces;
    cfg.emit_phases = flags.emit_phases;

    if (dump_config) {
      std::cout << cfg.dump().dump(2) << '\n';
      return 0;
    }
    if (cmd == solve) return cmd_solve(gset_path, cfg);
    if (cmd == adder) return cmd_adder(clamp_spec, cfg);
    if (cmd == study) return cmd_study(kind, sizes, samples, sparse_p, cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
