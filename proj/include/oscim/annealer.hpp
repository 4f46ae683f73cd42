#pragma once

// Multi-restart solver harness with ensemble statistics, random network
// generators for scaling studies, and invertible-logic solving with clamped
// variables.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "oscim/ising.hpp"
#include "oscim/sde.hpp"

namespace oscim {

struct DetuningSpec {
  enum class Kind { zero, gaussian };
  Kind kind = Kind::zero;
  double sigma = 0.0;

  static DetuningSpec none() { return {}; }
  static DetuningSpec gaussian(double sigma);
};

struct SolveConfig {
  Schedule schedule;
  SimOptions options;
  int runs = 100;
  std::uint64_t master_seed = 0;
  CouplingFunction coupling = CouplingFunction::sinusoid();
  DetuningSpec detuning;
  int threads = 0;  // 0 = hardware concurrency
};

/// Frozen default annealing profile: coupling ramps up over the first 80% of
/// the horizon, SYNC is pumped up and down twice, noise is held flat and
/// quenched near the end so the readout is clean.
Schedule default_annealing_schedule(double t_end);
SolveConfig default_solve_config(std::uint64_t master_seed = 0);

struct RunReport {
  int run_index = 0;
  std::uint64_t seed = 0;
  SpinVector spins;
  double energy = 0.0;  // Ising Hamiltonian of the readout
  double cut = 0.0;     // when graph-backed
  double binarity = 0.0;
  bool diverged = false;
  std::shared_ptr<const Trace> trace;  // decimated per options.record_stride
};

struct EnsembleStats {
  int runs = 0;
  int failed = 0;
  double mean_cut = 0.0;
  double best_cut = 0.0;
  double worst_cut = 0.0;
  double mean_energy = 0.0;
  double best_energy = 0.0;
  std::optional<double> oracle_energy;
  std::optional<double> success_rate;  // fraction of runs matching the oracle
};

struct SolveResult {
  std::vector<RunReport> reports;  // ordered by run_index
  EnsembleStats stats;
};

/// Run `cfg.runs` independent anneals; run r uses the seed derived from
/// (master_seed, r). Runs may execute on a worker pool, but reports and stats
/// are identical for any thread count. Diverged runs are reported and
/// excluded from the statistics.
SolveResult multi_run(const IsingProblem& problem, const SolveConfig& cfg,
                      const WeightedGraph* graph = nullptr,
                      std::optional<double> oracle_energy = std::nullopt);

enum class NetworkKind { full, sparse, line };
enum class WeightDist { uniform01, uniform02, pm_one };

/// Random coupling network, deterministic per seed. `p` is the independent
/// keep probability of each pair for the sparse kind.
WeightedGraph generate_network(NetworkKind kind, int n, WeightDist dist,
                               std::uint64_t seed, double p = 1.0);

struct StudyPoint {
  NetworkKind kind = NetworkKind::full;
  int n = 0;
  double p = 1.0;  // keep probability, sparse kind only
};

struct StudyRow {
  NetworkKind kind = NetworkKind::full;
  int n = 0;
  int sample = 0;
  double settling_time = 0.0;
  double final_energy = 0.0;
  bool settled = false;  // false => settling_time is the horizon t_end
  std::vector<double> times;
  std::vector<double> normalized_energy;  // energy trace scaled by |final|
};

/// Deterministic convergence study: for each (kind, n) simulate
/// `samples_per_point` random networks with weights uniform on (0,1) and
/// record when max |dphi/dt| first drops below options.stop_tol.
/// Requires a noise-free schedule.
std::vector<StudyRow> convergence_study(const std::vector<StudyPoint>& points,
                                        int samples_per_point,
                                        const SolveConfig& cfg);

struct LogicResult {
  Eigen::VectorXi assignment;  // 0/1 value per variable (clamps echoed back)
  SpinVector spins;
  bool valid = false;    // penalty energy equals the known ground value
  double penalty = 0.0;  // qubo energy at the readout
  double binarity = 0.0;
};

/// Anneal the spin form of `lp` with the clamped variables pinned at phase 0
/// (logic 1) or pi (logic 0), then read out the free variables.
LogicResult invertible_solve(const LogicProblem& lp,
                             const std::map<int, int>& clamps,
                             const SolveConfig& cfg);

const char* to_string(NetworkKind kind);
const char* to_string(WeightDist dist);

nlohmann::json stats_to_json(const EnsembleStats& stats);
void write_runs_csv(std::ostream& out, const std::vector<RunReport>& reports);
void write_study_csv(std::ostream& out, const std::vector<StudyRow>& rows);

}  // namespace oscim
