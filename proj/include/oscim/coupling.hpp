#pragma once

// Pairwise coupling nonlinearity g and its potential V with V' = -g.
//
// Two families: the plain sinusoid (g = sin, V = cos) and a smooth-square
// shape g(d) = tanh(rho*sin d)/tanh(rho) that interpolates between sin
// (rho -> 0) and a square wave (rho -> inf). For the latter the potential has
// no closed form; it is integrated once on a uniform 4096-point grid and
// served through a periodic C2 cubic spline.

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace oscim {

/// Periodic natural cubic spline on a uniform grid over [0, 2*pi).
class PeriodicSpline {
 public:
  PeriodicSpline() = default;
  explicit PeriodicSpline(std::vector<double> values);  // values.size() >= 4

  double operator()(double x) const;
  bool empty() const { return values_.empty(); }
  std::size_t grid_size() const { return values_.size(); }

 private:
  std::vector<double> values_;
  std::vector<double> second_;  // second derivatives at the knots
  double step_ = 0.0;
};

class CouplingFunction {
 public:
  enum class Kind { sinusoid, smooth_square };

  static CouplingFunction sinusoid();
  static CouplingFunction smooth_square(double rho);

  Kind kind() const { return kind_; }
  double rho() const { return rho_; }

  /// Odd, 2*pi-periodic coupling term.
  double g(double delta) const;

  /// Even, 2*pi-periodic potential with V'(d) = -g(d) and V(0) = 1.
  double potential(double delta) const;

  /// CSV grid (delta,g,V) for inspection.
  void write_potential_csv(std::ostream& out, int points = 512) const;

  static constexpr int kGridPoints = 4096;

 private:
  CouplingFunction() = default;

  Kind kind_ = Kind::sinusoid;
  double rho_ = 0.0;
  double inv_tanh_rho_ = 0.0;
  PeriodicSpline potential_;
};

CouplingFunction make_coupling(CouplingFunction::Kind kind, double rho = 4.0);

}  // namespace oscim
