#pragma once

// Ising problem representation: sparse symmetric couplings over unordered
// index pairs, per-spin fields, Hamiltonian/cut evaluation and exhaustive
// ground-state search.
//
// Conventions used throughout:
//   H(s) = sum_{i<j} w_ij s_i s_j + sum_i h_i s_i,   s_i in {-1,+1}
// with every unordered pair counted once. The equivalent dense symmetric
// matrix view (coupling_matrix) carries w_ij / 2 in both (i,j) and (j,i), so
// that H = s^T M s + h^T s under the full double sum.

#include <Eigen/Core>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace oscim {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Spin configuration; entries must be exactly -1 or +1.
using SpinVector = Eigen::VectorXi;

/// Error while reading an external text format; carries the 1-based line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct Edge {
  int i = 0;
  int j = 0;
  double w = 0.0;
};

/// Undirected weighted graph; edges are stored with i < j, no duplicates.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  WeightedGraph(int n, std::vector<Edge> edges);

  int order() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  double total_weight() const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
};

struct GsetData {
  WeightedGraph graph;
  int duplicates = 0;  // pairs listed more than once (last occurrence kept)
};

/// Parse the G-set text format: "<n> <m>" then m lines "<i> <j> <w>" with
/// 1-based vertex indices. Throws ParseError naming the offending line.
GsetData parse_gset(std::istream& in);
GsetData load_gset(const std::string& path);

class IsingProblem {
 public:
  IsingProblem(int n, std::vector<Edge> couplings, Vector fields);
  IsingProblem(int n, std::vector<Edge> couplings);  // zero fields

  static IsingProblem from_graph(const WeightedGraph& g);

  int size() const { return n_; }
  const std::vector<Edge>& couplings() const { return couplings_; }
  const Vector& fields() const { return fields_; }

  bool field_free() const;
  /// sum_{i<j} w_ij, the constant in the cut identity H = sum(w) - 2 S_c.
  double coupling_sum() const;
  /// Dense symmetric matrix view with w_ij/2 in both triangles.
  Matrix coupling_matrix() const;

  nlohmann::json to_json() const;
  static IsingProblem from_json(const nlohmann::json& j);

 private:
  int n_ = 0;
  std::vector<Edge> couplings_;
  Vector fields_;
};

/// H(s) with spins in {-1,+1}.
double ising_energy(const SpinVector& spins, const IsingProblem& problem);

/// Same problem data evaluated over 0/1 variables (penalty/QUBO form).
double qubo_energy(const Eigen::VectorXi& x, const IsingProblem& problem);

/// Total weight of edges whose endpoints carry opposite spins.
double cut_size(const SpinVector& spins, const WeightedGraph& graph);

/// Fold the fields into couplings to an appended reference spin that is held
/// at +1: the (n+1)-spin result has zero fields and the same energy as the
/// original on every configuration when the reference reads +1.
IsingProblem homogenize(const IsingProblem& problem);

SpinVector binary_to_spin(const Eigen::VectorXi& x);  // s = 2x - 1
Eigen::VectorXi spin_to_binary(const SpinVector& s);

struct GroundState {
  double energy = 0.0;
  std::vector<SpinVector> minimizers;  // lexicographic order, -1 before +1
};

/// Exhaustive minimum over all 2^n configurations; n <= 24.
GroundState brute_force_ground(const IsingProblem& problem);

/// Penalty-form encoding of an invertible-logic relation. `qubo` is exact in
/// 0/1 variables (zero on every valid assignment); `spin` is the +-1 variant
/// whose energy is an affine rescaling of the penalty, so both share the same
/// ground set.
struct LogicProblem {
  IsingProblem qubo;
  IsingProblem spin;
  std::vector<std::string> names;
  double ground_value = 0.0;
};

/// Half adder a + b = 2c + s over variables (c, s, a, b).
LogicProblem encode_half_adder();

}  // namespace oscim
