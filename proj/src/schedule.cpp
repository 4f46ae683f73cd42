#include "oscim/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oscim {

Profile::Profile(double constant_value) {
  if (!std::isfinite(constant_value) || constant_value < 0.0) {
    throw std::invalid_argument("profile values must be finite and >= 0");
  }
  points_ = {{0.0, constant_value}};
}

Profile::Profile(std::vector<std::pair<double, double>> breakpoints)
    : points_(std::move(breakpoints)) {
  if (points_.empty()) {
    throw std::invalid_argument("profile needs at least one breakpoint");
  }
  for (std::size_t k = 0; k < points_.size(); ++k) {
    const auto& [t, v] = points_[k];
    if (!std::isfinite(t)) throw std::invalid_argument("breakpoint time must be finite");
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("profile values must be finite and >= 0");
    }
    if (k > 0 && t <= points_[k - 1].first) {
      throw std::invalid_argument("breakpoint times must be strictly increasing");
    }
  }
}

double Profile::at(double t) const {
  if (t <= points_.front().first) return points_.front().second;
  if (t >= points_.back().first) return points_.back().second;
  auto hi = std::upper_bound(points_.begin(), points_.end(), t,
                             [](double x, const auto& p) { return x < p.first; });
  auto lo = hi - 1;
  const double f = (t - lo->first) / (hi->first - lo->first);
  return lo->second + f * (hi->second - lo->second);
}

double Profile::max_value() const {
  double m = 0.0;
  for (const auto& [t, v] : points_) m = std::max(m, v);
  return m;
}

bool Profile::always_zero() const { return max_value() == 0.0; }

nlohmann::json Profile::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [t, v] : points_) arr.push_back({t, v});
  return arr;
}

Profile Profile::from_json(const nlohmann::json& j) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : j) {
    pts.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
  }
  return Profile(std::move(pts));
}

nlohmann::json Schedule::to_json() const {
  return {{"a_c", coupling_.to_json()},
          {"a_s", sync_.to_json()},
          {"a_n", noise_.to_json()}};
}

Schedule Schedule::from_json(const nlohmann::json& j) {
  return Schedule(Profile::from_json(j.at("a_c")), Profile::from_json(j.at("a_s")),
                  Profile::from_json(j.at("a_n")));
}

}  // namespace oscim
