#include "oscim/ising.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace oscim {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be finite");
  }
}

std::vector<Edge> canonicalize_edges(int n, std::vector<Edge> edges,
                                     const char* what) {
  for (Edge& e : edges) {
    if (e.i > e.j) std::swap(e.i, e.j);
    if (e.i < 0 || e.j >= n || e.i == e.j) {
      throw std::invalid_argument(std::string(what) + ": bad pair (" +
                                  std::to_string(e.i) + ", " +
                                  std::to_string(e.j) + ") for n=" +
                                  std::to_string(n));
    }
    require_finite(e.w, what);
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  for (std::size_t k = 1; k < edges.size(); ++k) {
    if (edges[k].i == edges[k - 1].i && edges[k].j == edges[k - 1].j) {
      throw std::invalid_argument(std::string(what) + ": duplicate pair (" +
                                  std::to_string(edges[k].i) + ", " +
                                  std::to_string(edges[k].j) + ")");
    }
  }
  return edges;
}

void check_spins(const SpinVector& s, int n, const char* what) {
  if (s.size() != n) {
    throw std::invalid_argument(std::string(what) + ": got " +
                                std::to_string(s.size()) + " spins for n=" +
                                std::to_string(n));
  }
  for (int i = 0; i < n; ++i) {
    if (s[i] != 1 && s[i] != -1) {
      throw std::invalid_argument(std::string(what) + ": spin " +
                                  std::to_string(i) + " is not +-1");
    }
  }
}

}  // namespace

WeightedGraph::WeightedGraph(int n, std::vector<Edge> edges) : n_(n) {
  if (n < 1) throw std::invalid_argument("graph needs at least one vertex");
  edges_ = canonicalize_edges(n, std::move(edges), "graph edge");
}

double WeightedGraph::total_weight() const {
  double sum = 0.0;
  for (const Edge& e : edges_) sum += e.w;
  return sum;
}

GsetData parse_gset(std::istream& in) {
  std::string line;
  int line_no = 0;
  long n = 0, m = 0;
  // Header: first non-empty line.
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string extra;
    if (ls >> n >> m) {
      if (ls >> extra) throw ParseError("unexpected token after header", line_no);
      break;
    }
    std::istringstream blank(line);
    std::string tok;
    if (blank >> tok) throw ParseError("malformed header, expected '<n> <m>'", line_no);
  }
  if (line_no == 0) throw ParseError("empty input", 1);
  if (n < 1) throw ParseError("vertex count must be positive", line_no);
  if (m < 0) throw ParseError("edge count must be non-negative", line_no);

  // Last occurrence of a pair wins; remember how many got replaced.
  std::map<std::pair<int, int>, double> weights;
  int duplicates = 0;
  long seen = 0;
  while (seen < m && std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    {
      std::istringstream probe(line);
      if (!(probe >> tok)) continue;  // blank line
    }
    long i = 0, j = 0;
    double w = 0.0;
    if (!(ls >> i >> j >> w)) throw ParseError("malformed edge line", line_no);
    if (ls >> tok) throw ParseError("unexpected token after edge", line_no);
    if (i < 1 || i > n) {
      throw ParseError("vertex index " + std::to_string(i) + " out of range [1," +
                           std::to_string(n) + "]",
                       line_no);
    }
    if (j < 1 || j > n) {
      throw ParseError("vertex index " + std::to_string(j) + " out of range [1," +
                           std::to_string(n) + "]",
                       line_no);
    }
    if (i == j) throw ParseError("self-loop on vertex " + std::to_string(i), line_no);
    if (!std::isfinite(w)) throw ParseError("non-finite weight", line_no);
    int a = static_cast<int>(i - 1), b = static_cast<int>(j - 1);
    if (a > b) std::swap(a, b);
    auto [it, inserted] = weights.insert_or_assign(std::make_pair(a, b), w);
    (void)it;
    if (!inserted) ++duplicates;
    ++seen;
  }
  if (seen < m) {
    throw ParseError("expected " + std::to_string(m) + " edges, found " +
                         std::to_string(seen),
                     line_no + 1);
  }
  // Anything non-blank after the declared edges is an inconsistency.
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    if (ls >> tok) throw ParseError("data past declared edge count", line_no);
  }

  std::vector<Edge> edges;
  edges.reserve(weights.size());
  for (const auto& [pair, w] : weights) edges.push_back({pair.first, pair.second, w});
  return GsetData{WeightedGraph(static_cast<int>(n), std::move(edges)), duplicates};
}

GsetData load_gset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return parse_gset(in);
}

IsingProblem::IsingProblem(int n, std::vector<Edge> couplings, Vector fields)
    : n_(n), fields_(std::move(fields)) {
  if (n < 1) throw std::invalid_argument("problem needs at least one spin");
  if (fields_.size() != n) {
    throw std::invalid_argument("field vector length " +
                                std::to_string(fields_.size()) + " != n=" +
                                std::to_string(n));
  }
  for (int i = 0; i < n; ++i) require_finite(fields_[i], "field");
  couplings_ = canonicalize_edges(n, std::move(couplings), "coupling");
}

IsingProblem::IsingProblem(int n, std::vector<Edge> couplings)
    : IsingProblem(n, std::move(couplings), Vector::Zero(n)) {}

IsingProblem IsingProblem::from_graph(const WeightedGraph& g) {
  return IsingProblem(g.order(), g.edges());
}

bool IsingProblem::field_free() const {
  return (fields_.array() == 0.0).all();
}

double IsingProblem::coupling_sum() const {
  double sum = 0.0;
  for (const Edge& e : couplings_) sum += e.w;
  return sum;
}

Matrix IsingProblem::coupling_matrix() const {
  Matrix m = Matrix::Zero(n_, n_);
  for (const Edge& e : couplings_) {
    m(e.i, e.j) = e.w / 2.0;
    m(e.j, e.i) = e.w / 2.0;
  }
  return m;
}

nlohmann::json IsingProblem::to_json() const {
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : couplings_) edges.push_back({e.i, e.j, e.w});
  nlohmann::json h = nlohmann::json::array();
  for (int i = 0; i < n_; ++i) h.push_back(fields_[i]);
  return {{"n", n_}, {"edges", edges}, {"h", h}};
}

IsingProblem IsingProblem::from_json(const nlohmann::json& j) {
  const int n = j.at("n").get<int>();
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges")) {
    edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>()});
  }
  Vector h = Vector::Zero(n);
  if (j.contains("h")) {
    const auto& hv = j.at("h");
    if (static_cast<int>(hv.size()) != n) {
      throw std::invalid_argument("field array length mismatch in JSON problem");
    }
    for (int i = 0; i < n; ++i) h[i] = hv.at(i).get<double>();
  }
  return IsingProblem(n, std::move(edges), std::move(h));
}

double ising_energy(const SpinVector& spins, const IsingProblem& problem) {
  check_spins(spins, problem.size(), "ising_energy");
  double coupling = 0.0;
  for (const Edge& e : problem.couplings()) {
    coupling += e.w * static_cast<double>(spins[e.i] * spins[e.j]);
  }
  double field = 0.0;
  for (int i = 0; i < problem.size(); ++i) {
    field += problem.fields()[i] * static_cast<double>(spins[i]);
  }
  return coupling + field;
}

double qubo_energy(const Eigen::VectorXi& x, const IsingProblem& problem) {
  if (x.size() != problem.size()) {
    throw std::invalid_argument("qubo_energy: got " + std::to_string(x.size()) +
                                " variables for n=" + std::to_string(problem.size()));
  }
  for (int i = 0; i < x.size(); ++i) {
    if (x[i] != 0 && x[i] != 1) {
      throw std::invalid_argument("qubo_energy: variable " + std::to_string(i) +
                                  " is not 0/1");
    }
  }
  double acc = 0.0;
  for (const Edge& e : problem.couplings()) {
    acc += e.w * static_cast<double>(x[e.i] * x[e.j]);
  }
  for (int i = 0; i < problem.size(); ++i) {
    acc += problem.fields()[i] * static_cast<double>(x[i]);
  }
  return acc;
}

double cut_size(const SpinVector& spins, const WeightedGraph& graph) {
  check_spins(spins, graph.order(), "cut_size");
  double cut = 0.0;
  for (const Edge& e : graph.edges()) {
    if (spins[e.i] != spins[e.j]) cut += e.w;
  }
  return cut;
}

IsingProblem homogenize(const IsingProblem& problem) {
  const int n = problem.size();
  std::vector<Edge> edges = problem.couplings();
  for (int k = 0; k < n; ++k) {
    const double h = problem.fields()[k];
    if (h != 0.0) edges.push_back({k, n, h});
  }
  return IsingProblem(n + 1, std::move(edges));
}

SpinVector binary_to_spin(const Eigen::VectorXi& x) {
  SpinVector s(x.size());
  for (int i = 0; i < x.size(); ++i) {
    if (x[i] != 0 && x[i] != 1) {
      throw std::invalid_argument("binary_to_spin: entry " + std::to_string(i) +
                                  " is not 0/1");
    }
    s[i] = 2 * x[i] - 1;
  }
  return s;
}

Eigen::VectorXi spin_to_binary(const SpinVector& s) {
  Eigen::VectorXi x(s.size());
  for (int i = 0; i < s.size(); ++i) {
    if (s[i] != 1 && s[i] != -1) {
      throw std::invalid_argument("spin_to_binary: entry " + std::to_string(i) +
                                  " is not +-1");
    }
    x[i] = (s[i] + 1) / 2;
  }
  return x;
}

GroundState brute_force_ground(const IsingProblem& problem) {
  const int n = problem.size();
  if (n > 24) {
    throw std::invalid_argument("brute_force_ground: n=" + std::to_string(n) +
                                " exceeds the enumeration bound of 24");
  }

  struct Neighbor {
    int j;
    double w;
  };
  std::vector<std::vector<Neighbor>> adj(n);
  for (const Edge& e : problem.couplings()) {
    adj[e.i].push_back({e.j, e.w});
    adj[e.j].push_back({e.i, e.w});
  }

  double scale = 1.0;
  for (const Edge& e : problem.couplings()) scale += std::abs(e.w);
  for (int i = 0; i < n; ++i) scale += std::abs(problem.fields()[i]);
  const double margin = 1e-6 * scale;

  // Gray-code sweep with incremental energy; bit b set <=> spin b is +1.
  std::vector<int> spins(n, -1);
  SpinVector sv = SpinVector::Constant(n, -1);
  double energy = ising_energy(sv, problem);
  std::uint32_t state = 0;

  double best = energy;
  std::vector<std::uint32_t> candidates{0};

  const std::uint64_t total = 1ull << n;
  for (std::uint64_t g = 1; g < total; ++g) {
    const int k = std::countr_zero(g);
    double local = problem.fields()[k];
    for (const Neighbor& nb : adj[k]) local += nb.w * spins[nb.j];
    energy += -2.0 * spins[k] * local;
    spins[k] = -spins[k];
    state ^= (1u << k);

    if (energy < best - margin) {
      best = energy;
      candidates.clear();
      candidates.push_back(state);
    } else if (energy <= best + margin) {
      candidates.push_back(state);
      if (candidates.size() > (1u << 20)) {
        // Re-filter against the current best to keep degenerate landscapes
        // from hoarding memory.
        std::vector<std::uint32_t> keep;
        for (std::uint32_t c : candidates) {
          SpinVector t(n);
          for (int b = 0; b < n; ++b) t[b] = (c >> b) & 1 ? 1 : -1;
          if (ising_energy(t, problem) <= best + margin) keep.push_back(c);
        }
        candidates.swap(keep);
      }
    }
  }

  // Evaluate candidates afresh; the incremental energy above carries rounding
  // drift, these values do not.
  double exact_best = std::numeric_limits<double>::infinity();
  std::vector<std::pair<std::uint32_t, double>> exact;
  exact.reserve(candidates.size());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());
  for (std::uint32_t c : candidates) {
    SpinVector t(n);
    for (int b = 0; b < n; ++b) t[b] = (c >> b) & 1 ? 1 : -1;
    const double h = ising_energy(t, problem);
    exact.emplace_back(c, h);
    exact_best = std::min(exact_best, h);
  }

  GroundState result;
  result.energy = exact_best;
  const double tie_tol = 1e-12 * scale;
  for (const auto& [c, h] : exact) {
    if (h <= exact_best + tie_tol) {
      SpinVector t(n);
      for (int b = 0; b < n; ++b) t[b] = (c >> b) & 1 ? 1 : -1;
      result.minimizers.push_back(std::move(t));
    }
  }
  std::sort(result.minimizers.begin(), result.minimizers.end(),
            [](const SpinVector& a, const SpinVector& b) {
              for (int i = 0; i < a.size(); ++i) {
                if (a[i] != b[i]) return a[i] < b[i];
              }
              return false;
            });
  return result;
}

LogicProblem encode_half_adder() {
  // Penalty (a + b - 2c - s)^2 over x = (c, s, a, b); pair weights are the
  // cross-term coefficients of the expansion, fields the diagonal ones.
  std::vector<Edge> qubo_edges = {{0, 1, 4.0},  {0, 2, -4.0}, {0, 3, -4.0},
                                  {1, 2, -2.0}, {1, 3, -2.0}, {2, 3, 2.0}};
  Vector hx(4);
  hx << 4.0, 1.0, 1.0, 1.0;
  IsingProblem qubo(4, std::move(qubo_edges), std::move(hx));

  // +-1 variant: twice the penalty up to a constant, so the ground set is
  // identical. E_spin(s) = 2 * E_qubo((s+1)/2) - 4.
  std::vector<Edge> spin_edges = {{0, 1, 2.0},  {0, 2, -2.0}, {0, 3, -2.0},
                                  {1, 2, -1.0}, {1, 3, -1.0}, {2, 3, 1.0}};
  Vector h(4);
  h << 2.0, 1.0, -1.0, -1.0;
  IsingProblem spin(4, std::move(spin_edges), std::move(h));

  return LogicProblem{std::move(qubo), std::move(spin), {"c", "s", "a", "b"}, 0.0};
}

}  // namespace oscim
