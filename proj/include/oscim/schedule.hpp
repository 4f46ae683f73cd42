#pragma once

// Piecewise-linear annealing profiles for the three drive strengths
// (mutual coupling A_c, SYNC A_s, noise amplitude A_n).

#include <utility>
#include <vector>

#include <json.hpp>

namespace oscim {

/// Piecewise-linear, non-negative profile over time; constant before the
/// first breakpoint and after the last.
class Profile {
 public:
  Profile() : Profile(0.0) {}
  explicit Profile(double constant_value);
  explicit Profile(std::vector<std::pair<double, double>> breakpoints);

  static Profile constant(double v) { return Profile(v); }

  double at(double t) const;
  double max_value() const;
  bool always_zero() const;

  const std::vector<std::pair<double, double>>& breakpoints() const {
    return points_;
  }

  nlohmann::json to_json() const;
  static Profile from_json(const nlohmann::json& j);

 private:
  std::vector<std::pair<double, double>> points_;
};

class Schedule {
 public:
  Schedule() = default;
  Schedule(Profile coupling, Profile sync, Profile noise)
      : coupling_(std::move(coupling)),
        sync_(std::move(sync)),
        noise_(std::move(noise)) {}

  struct Values {
    double coupling = 0.0;  // A_c
    double sync = 0.0;      // A_s
    double noise = 0.0;     // A_n
  };

  Values at(double t) const {
    return {coupling_.at(t), sync_.at(t), noise_.at(t)};
  }

  const Profile& coupling() const { return coupling_; }
  const Profile& sync() const { return sync_; }
  const Profile& noise() const { return noise_; }

  nlohmann::json to_json() const;
  static Schedule from_json(const nlohmann::json& j);

 private:
  Profile coupling_;
  Profile sync_;
  Profile noise_;
};

}  // namespace oscim
