#pragma once

// Flat-spacetime geometry in units where the signal speed is 1, so
// distances and times share one unit.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"
#include "relcoin/canonical_json.hpp"
#include "relcoin/error.hpp"

namespace relcoin {

using Position = std::vector<double>;

struct SpacetimePoint {
  Position position;
  double time = 0.0;

  friend bool operator==(const SpacetimePoint&, const SpacetimePoint&) = default;
};

namespace detail {

inline void require_same_dim(const Position& p, const Position& q) {
  if (p.size() != q.size()) {
    throw DimensionMismatch("spatial dimension mismatch: " + std::to_string(p.size()) + " vs " +
                            std::to_string(q.size()));
  }
}

inline bool all_finite(const Position& p) {
  return std::all_of(p.begin(), p.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace detail

inline double distance(const Position& p, const Position& q) {
  detail::require_same_dim(p, q);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = q[i] - p[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

// Squared Minkowski interval, signature (+, -, ..., -): positive for
// timelike separation, negative for spacelike.
inline double interval(const SpacetimePoint& p, const SpacetimePoint& q) {
  detail::require_same_dim(p.position, q.position);
  const double dt = q.time - p.time;
  double dx2 = 0.0;
  for (std::size_t i = 0; i < p.position.size(); ++i) {
    const double d = q.position[i] - p.position[i];
    dx2 += d * d;
  }
  return dt * dt - dx2;
}

// True iff q lies in or on the future light cone of p.
inline bool causally_precedes(const SpacetimePoint& p, const SpacetimePoint& q) {
  return q.time >= p.time + distance(p.position, q.position);
}

inline double earliest_arrival(const SpacetimePoint& p, const Position& target) {
  return p.time + distance(p.position, target);
}

// Two sites with laboratories of radius delta around each, an exclusion
// radius epsilon, and a pre-arranged start time.
struct ScenarioConfig {
  Position site1{0.0};
  Position site2{10.0};
  double epsilon = 0.5;
  double delta = 1.0;
  double start_time = 0.0;
  // Separation must exceed safety_factor * delta.
  double safety_factor = 4.0;

  double separation() const { return distance(site1, site2); }
  std::size_t spatial_dim() const { return site1.size(); }

  void validate() const {
    if (site1.empty()) throw ConfigError("scenario: sites need at least one spatial coordinate");
    if (site1.size() != site2.size()) throw ConfigError("scenario: site dimensions differ");
    if (!detail::all_finite(site1) || !detail::all_finite(site2)) {
      throw ConfigError("scenario: site coordinates must be finite");
    }
    if (!std::isfinite(start_time)) throw ConfigError("scenario: start_time must be finite");
    if (!std::isfinite(epsilon) || !std::isfinite(delta) || !std::isfinite(safety_factor)) {
      throw ConfigError("scenario: radii and safety_factor must be finite");
    }
    if (!(epsilon > 0.0)) throw ConfigError("scenario: epsilon must be positive");
    if (!(delta > epsilon)) throw ConfigError("scenario: delta must exceed epsilon");
    if (!(safety_factor >= 4.0)) throw ConfigError("scenario: safety_factor must be at least 4");
    if (!(separation() > safety_factor * delta)) {
      throw ConfigError("scenario: site separation must exceed safety_factor * delta");
    }
  }

  // Sites on a line at 0 and `separation`.
  static ScenarioConfig line(double separation, double delta, double epsilon, double start_time = 0.0) {
    ScenarioConfig cfg;
    cfg.site1 = {0.0};
    cfg.site2 = {separation};
    cfg.delta = delta;
    cfg.epsilon = epsilon;
    cfg.start_time = start_time;
    cfg.validate();
    return cfg;
  }
};

inline ojson to_json(const SpacetimePoint& p) {
  ojson j;
  j["position"] = p.position;
  j["time"] = p.time;
  return j;
}

inline SpacetimePoint point_from_json(const nlohmann::json& j) {
  require_known_keys(j, {"position", "time"}, "spacetime point");
  return {j.at("position").get<Position>(), j.at("time").get<double>()};
}

inline ojson to_json(const ScenarioConfig& s) {
  ojson j;
  j["site1"] = s.site1;
  j["site2"] = s.site2;
  j["epsilon"] = s.epsilon;
  j["delta"] = s.delta;
  j["start_time"] = s.start_time;
  j["safety_factor"] = s.safety_factor;
  return j;
}

// Missing fields fall back to the defaults above; the result is validated.
inline ScenarioConfig scenario_from_json(const nlohmann::json& j) {
  require_known_keys(j, {"site1", "site2", "epsilon", "delta", "start_time", "safety_factor"}, "scenario");
  ScenarioConfig s;
  try {
    if (j.contains("site1")) s.site1 = j.at("site1").get<Position>();
    if (j.contains("site2")) s.site2 = j.at("site2").get<Position>();
    if (j.contains("epsilon")) s.epsilon = j.at("epsilon").get<double>();
    if (j.contains("delta")) s.delta = j.at("delta").get<double>();
    if (j.contains("start_time")) s.start_time = j.at("start_time").get<double>();
    if (j.contains("safety_factor")) s.safety_factor = j.at("safety_factor").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
  s.validate();
  return s;
}

}  // namespace relcoin
