#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <set>
#include <sstream>

#include "oscim/annealer.hpp"
#include "oscim/rng.hpp"

using namespace oscim;

namespace {

SolveConfig quick_config(std::uint64_t master_seed, int runs) {
  SolveConfig cfg = default_solve_config(master_seed);
  cfg.runs = runs;
  cfg.options.record_stride = 1 << 20;  // endpoints only
  return cfg;
}

}  // namespace

TEST_CASE("multi_run with one run reproduces a plain simulation") {
  const WeightedGraph g =
      generate_network(NetworkKind::full, 6, WeightDist::uniform02, 3);
  const IsingProblem p = IsingProblem::from_graph(g);
  SolveConfig cfg = quick_config(99, 1);

  const SolveResult res = multi_run(p, cfg, &g);
  REQUIRE(res.reports.size() == 1);
  const RunReport& r = res.reports[0];
  CHECK_FALSE(r.diverged);

  SimOptions options = cfg.options;
  options.seed = rng::derive_seed(99, 0);
  const SimResult direct = simulate(p, cfg.schedule, cfg.coupling,
                                    Vector::Zero(6), options, &g);
  CHECK(r.spins == direct.final_readout.spins);
  CHECK(r.energy == ising_energy(direct.final_readout.spins, p));
  CHECK(res.stats.mean_cut == r.cut);
  CHECK(res.stats.best_cut == r.cut);
}

TEST_CASE("reports stay consistent with the problem data") {
  const WeightedGraph g =
      generate_network(NetworkKind::sparse, 12, WeightDist::pm_one, 21, 0.5);
  const IsingProblem p = IsingProblem::from_graph(g);
  SolveConfig cfg = quick_config(5, 8);
  const SolveResult res = multi_run(p, cfg, &g);
  for (const RunReport& r : res.reports) {
    REQUIRE_FALSE(r.diverged);
    CHECK(r.energy == ising_energy(r.spins, p));
    CHECK(r.cut == cut_size(r.spins, g));
    // Cut identity ties the two scores together.
    CHECK(r.energy + 2.0 * r.cut == doctest::Approx(p.coupling_sum()).epsilon(1e-12));
  }
}

TEST_CASE("antiferromagnetic pair ensemble almost always splits") {
  const IsingProblem p(2, {{0, 1, 1.0}});
  const WeightedGraph g(2, {{0, 1, 1.0}});
  SolveConfig cfg = quick_config(7, 100);
  const GroundState oracle = brute_force_ground(p);
  const SolveResult res = multi_run(p, cfg, &g, oracle.energy);
  REQUIRE(res.stats.success_rate.has_value());
  CHECK(*res.stats.success_rate >= 0.99);
}

TEST_CASE("size-6 regression fixture: pinned optimum partition") {
  // Frozen instance whose exhaustive optimum is the split {2,3,6} / {1,4,5}
  // in 1-based vertex labels.
  const WeightedGraph g =
      generate_network(NetworkKind::full, 6, WeightDist::uniform02, 1);
  const GroundState gs = brute_force_ground(IsingProblem::from_graph(g));
  CHECK(gs.energy == doctest::Approx(-6.564620).epsilon(1e-6));
  REQUIRE(gs.minimizers.size() == 2);  // the +- mirror pair
  SpinVector want(6);
  want << -1, 1, 1, -1, -1, 1;
  CHECK((gs.minimizers[0] == want || gs.minimizers[1] == want));
}

TEST_CASE("seeded size-6 instance anneals to the enumerated optimum") {
  const WeightedGraph g =
      generate_network(NetworkKind::full, 6, WeightDist::uniform02, 1);
  const IsingProblem p = IsingProblem::from_graph(g);
  const GroundState oracle = brute_force_ground(p);
  SolveConfig cfg = quick_config(11, 40);
  const SolveResult res = multi_run(p, cfg, &g, oracle.energy);
  REQUIRE(res.stats.success_rate.has_value());
  CHECK(*res.stats.success_rate >= 0.9);
  CHECK(res.stats.best_energy == doctest::Approx(oracle.energy));
}

TEST_CASE("ensemble statistics are independent of the thread count") {
  const WeightedGraph g =
      generate_network(NetworkKind::full, 8, WeightDist::uniform01, 2);
  const IsingProblem p = IsingProblem::from_graph(g);
  SolveConfig cfg = quick_config(123, 12);
  cfg.threads = 1;
  const SolveResult serial = multi_run(p, cfg, &g);
  cfg.threads = 4;
  const SolveResult parallel = multi_run(p, cfg, &g);
  CHECK(serial.stats.mean_cut == parallel.stats.mean_cut);
  CHECK(serial.stats.mean_energy == parallel.stats.mean_energy);
  REQUIRE(serial.reports.size() == parallel.reports.size());
  for (std::size_t k = 0; k < serial.reports.size(); ++k) {
    CHECK(serial.reports[k].seed == parallel.reports[k].seed);
    CHECK(serial.reports[k].spins == parallel.reports[k].spins);
    CHECK(serial.reports[k].energy == parallel.reports[k].energy);
  }
}

TEST_CASE("network generator shapes") {
  CHECK(generate_network(NetworkKind::full, 4, WeightDist::uniform01, 0).edges().size() == 6);
  const WeightedGraph line =
      generate_network(NetworkKind::line, 100, WeightDist::uniform01, 0);
  CHECK(line.edges().size() == 99);
  for (const Edge& e : line.edges()) CHECK(e.j == e.i + 1);

  // Sparse keep-probability: expected edge count p * C(100,2) = 495,
  // sigma = sqrt(495 * 0.9) ~ 21.
  const WeightedGraph sparse =
      generate_network(NetworkKind::sparse, 100, WeightDist::uniform01, 42, 0.1);
  const double expected = 0.1 * 4950.0;
  const double sigma = std::sqrt(4950.0 * 0.1 * 0.9);
  CHECK(std::abs(static_cast<double>(sparse.edges().size()) - expected) <
        3.0 * sigma);

  CHECK_THROWS_AS(generate_network(NetworkKind::sparse, 10, WeightDist::uniform01,
                                   0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(generate_network(NetworkKind::sparse, 10, WeightDist::uniform01,
                                   0, 1.5),
                  std::invalid_argument);
}

TEST_CASE("network weights follow the requested distribution and seed") {
  const WeightedGraph a =
      generate_network(NetworkKind::full, 20, WeightDist::uniform02, 9);
  const WeightedGraph b =
      generate_network(NetworkKind::full, 20, WeightDist::uniform02, 9);
  const WeightedGraph c =
      generate_network(NetworkKind::full, 20, WeightDist::uniform02, 10);
  REQUIRE(a.edges().size() == b.edges().size());
  bool all_same = true;
  for (std::size_t k = 0; k < a.edges().size(); ++k) {
    CHECK(a.edges()[k].w == b.edges()[k].w);
    CHECK(a.edges()[k].w >= 0.0);
    CHECK(a.edges()[k].w <= 2.0);
    all_same = all_same && a.edges()[k].w == c.edges()[k].w;
  }
  CHECK_FALSE(all_same);

  const WeightedGraph pm =
      generate_network(NetworkKind::full, 10, WeightDist::pm_one, 3);
  for (const Edge& e : pm.edges()) CHECK(std::abs(e.w) == 1.0);
}

TEST_CASE("convergence study reports settling times") {
  SolveConfig cfg;
  cfg.schedule = Schedule(Profile::constant(1.0), Profile::constant(2.0),
                          Profile::constant(0.0));
  cfg.options.dt = 0.01;
  cfg.options.t_end = 50.0;
  cfg.options.stop_tol = 1e-3;
  cfg.master_seed = 4;
  const std::vector<StudyPoint> points = {{NetworkKind::full, 5},
                                          {NetworkKind::full, 10}};
  const auto rows = convergence_study(points, 3, cfg);
  REQUIRE(rows.size() == 6);
  for (const StudyRow& row : rows) {
    CHECK(row.settled);
    CHECK(row.settling_time > 0.0);
    CHECK(row.settling_time < 50.0);
    CHECK(row.final_energy < 0.0);
  }

  // Noisy schedules are rejected: settling is undefined under noise.
  SolveConfig noisy = cfg;
  noisy.schedule = Schedule(Profile::constant(1.0), Profile::constant(2.0),
                            Profile::constant(0.1));
  CHECK_THROWS_AS(convergence_study(points, 2, noisy), std::invalid_argument);
}

TEST_CASE("sparser networks settle into shallower energies") {
  SolveConfig cfg;
  cfg.schedule = Schedule(Profile::constant(0.05), Profile::constant(2.0),
                          Profile::constant(0.0));
  cfg.options.dt = 0.01;
  cfg.options.t_end = 50.0;
  cfg.options.stop_tol = 1e-3;
  cfg.options.record_stride = 1 << 20;
  cfg.master_seed = 31;
  double prev = 1e300;
  for (const double p : {1.0, 0.3, 0.1}) {
    const auto rows = convergence_study({{NetworkKind::sparse, 100, p}}, 6, cfg);
    double mean_abs = 0.0;
    for (const StudyRow& r : rows) mean_abs += std::abs(r.final_energy) / 6.0;
    CHECK(mean_abs < prev);
    prev = mean_abs;
  }
}

TEST_CASE("invertible half adder: forward evaluation") {
  const LogicProblem lp = encode_half_adder();
  SolveConfig cfg = quick_config(1234, 1);
  const LogicResult r = invertible_solve(lp, {{2, 1}, {3, 1}}, cfg);  // a=1,b=1
  CHECK(r.valid);
  CHECK(r.assignment[2] == 1);
  CHECK(r.assignment[3] == 1);
  CHECK(r.assignment[0] == 1);  // carry
  CHECK(r.assignment[1] == 0);  // sum
  CHECK(r.penalty == 0.0);
}

TEST_CASE("invertible half adder: reverse evaluation lands in the preimage") {
  const LogicProblem lp = encode_half_adder();
  // Enumerate the preimage of s=1 with the oracle.
  std::set<std::array<int, 3>> preimage;
  for (int c = 0; c < 2; ++c) {
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        if (a + b == 2 * c + 1) preimage.insert({c, a, b});
      }
    }
  }
  REQUIRE(preimage.size() == 2);

  int valid = 0;
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    SolveConfig cfg = quick_config(seed, 1);
    const LogicResult r = invertible_solve(lp, {{1, 1}}, cfg);  // clamp s=1
    CHECK(r.assignment[1] == 1);
    if (r.valid) {
      ++valid;
      CHECK(preimage.count({r.assignment[0], r.assignment[2], r.assignment[3]}) ==
            1);
    }
  }
  CHECK(valid >= 23);
}

TEST_CASE("invertible solve with every variable clamped echoes the clamps") {
  const LogicProblem lp = encode_half_adder();
  SolveConfig cfg = quick_config(5, 1);
  const LogicResult r =
      invertible_solve(lp, {{0, 1}, {1, 0}, {2, 1}, {3, 1}}, cfg);
  CHECK(r.valid);
  CHECK(r.assignment[0] == 1);
  CHECK(r.assignment[1] == 0);
  CHECK(r.assignment[2] == 1);
  CHECK(r.assignment[3] == 1);
  CHECK(r.binarity == doctest::Approx(1.0));
}

TEST_CASE("best energy over restarts matches the exhaustive optimum") {
  // Oracle agreement on small random problems with fields.
  int agree = 0;
  const int problems = 10;
  for (int k = 0; k < problems; ++k) {
    const std::uint64_t seed = 500 + k;
    std::vector<Edge> edges;
    Vector h(8);
    std::uint64_t q = 0;
    for (int i = 0; i < 8; ++i) {
      h[i] = rng::uniform(seed, 900 + i, 2, rng::Stream::network) - 0.5;
      for (int j = i + 1; j < 8; ++j) {
        if (rng::uniform(seed, q++, 0, rng::Stream::network) < 0.6) {
          edges.push_back(
              {i, j, 4.0 * rng::uniform(seed, q++, 1, rng::Stream::network) - 2.0});
        }
      }
    }
    const IsingProblem p(8, std::move(edges), std::move(h));
    const GroundState oracle = brute_force_ground(p);
    SolveConfig cfg = quick_config(800 + k, 30);
    cfg.options.t_end = 50.0;
    cfg.schedule = default_annealing_schedule(cfg.options.t_end);
    const SolveResult res = multi_run(p, cfg);
    if (res.stats.best_energy <= oracle.energy + 1e-9) ++agree;
  }
  CHECK(agree >= 9);  // >= 90% of problems hit the exact optimum
}

TEST_CASE("run reports expose the decimated trace") {
  const WeightedGraph g =
      generate_network(NetworkKind::full, 5, WeightDist::uniform01, 4);
  const IsingProblem p = IsingProblem::from_graph(g);
  SolveConfig cfg = quick_config(3, 2);
  cfg.options.record_stride = 400;
  const SolveResult res = multi_run(p, cfg, &g);
  for (const RunReport& r : res.reports) {
    REQUIRE(r.trace != nullptr);
    CHECK(r.trace->energy.size() == r.trace->times.size());
    CHECK(r.trace->cut.size() == r.trace->times.size());
    CHECK(r.trace->times.size() > 10);
    // The last recorded readout matches the report.
    CHECK(r.trace->cut.back() == r.cut);
  }
}

TEST_CASE("ensemble JSON and CSV exports") {
  const WeightedGraph g =
      generate_network(NetworkKind::full, 5, WeightDist::uniform01, 8);
  const IsingProblem p = IsingProblem::from_graph(g);
  SolveConfig cfg = quick_config(2, 3);
  const SolveResult res = multi_run(p, cfg, &g);

  const nlohmann::json j = stats_to_json(res.stats);
  CHECK(j.at("runs").get<int>() == 3);
  CHECK(j.contains("mean_cut"));
  CHECK(j.contains("best_cut"));

  std::ostringstream csv;
  write_runs_csv(csv, res.reports);
  std::istringstream in(csv.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "run_index,seed,energy,cut,binarity,diverged");
  int rows = 0;
  std::string line;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 3);

  std::ostringstream study;
  write_study_csv(study, {});
  CHECK(study.str() == "kind,n,sample,settling_time,final_energy\n");
}
