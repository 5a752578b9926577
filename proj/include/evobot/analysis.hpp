#pragma once

// Post-run analysis over robots.csv rows: per-generation quartiles, pooled
// Pareto flags, and the threshold tables compared with Welch's t-test.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "evobot/moea.hpp"
#include "evobot/records.hpp"
#include "evobot/stats.hpp"

namespace evobot {

inline constexpr std::array<std::string_view, 3> kMetrics{"speed", "battery", "balance"};

inline double metric_value(const RobotRow& r, std::string_view metric) {
  if (metric == "speed") return r.speed_cms;
  if (metric == "battery") return r.battery_remaining;
  if (metric == "balance") return r.balance;
  throw std::invalid_argument("unknown metric '" + std::string(metric) + "'");
}

/// Median and quartiles per (experiment, generation, metric), pooling runs.
inline std::vector<SummaryRow> summarize_generations(const std::vector<RobotRow>& rows) {
  std::map<std::pair<std::string, std::size_t>, std::vector<const RobotRow*>> groups;
  for (const auto& r : rows) groups[{r.experiment, r.generation}].push_back(&r);
  std::vector<SummaryRow> out;
  for (const auto& [key, members] : groups) {
    for (auto metric : kMetrics) {
      std::vector<double> v;
      v.reserve(members.size());
      for (const auto* r : members) v.push_back(metric_value(*r, metric));
      const auto q = aggregate_generation(v);
      out.push_back({key.first, key.second, std::string(metric), q.median, q.q1, q.q3});
    }
  }
  return out;
}

/// Non-dominated flags over a pooled set, in input order. Every point must
/// carry exactly two objectives.
inline std::vector<bool> nondominated_flags(const std::vector<ObjectiveVector>& points) {
  for (const auto& p : points)
    if (p.size() != 2) throw std::invalid_argument("pareto extraction needs two objectives per point");
  std::vector<bool> flags(points.size(), true);
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < points.size() && flags[i]; ++j)
      if (j != i && dominates(points[j], points[i])) flags[i] = false;
  return flags;
}

inline std::size_t last_generation(const std::vector<RobotRow>& rows, const std::string& experiment) {
  std::size_t g = 0;
  for (const auto& r : rows)
    if (r.experiment == experiment) g = std::max(g, r.generation);
  return g;
}

inline std::vector<std::string> experiments_in(const std::vector<RobotRow>& rows) {
  std::vector<std::string> names;
  for (const auto& r : rows)
    if (std::find(names.begin(), names.end(), r.experiment) == names.end()) names.push_back(r.experiment);
  return names;
}

/// Flags (speed, battery) dominance among the final-generation robots of each
/// experiment, pooled across runs. Output keeps robots.csv order.
inline std::vector<ParetoRow> extract_pareto(const std::vector<RobotRow>& rows) {
  std::vector<ParetoRow> out;
  for (const auto& exp : experiments_in(rows)) {
    const auto last = last_generation(rows, exp);
    std::vector<const RobotRow*> pooled;
    std::vector<ObjectiveVector> points;
    for (const auto& r : rows) {
      if (r.experiment != exp || r.generation != last) continue;
      pooled.push_back(&r);
      points.push_back({r.speed_cms, r.battery_remaining});
    }
    const auto flags = nondominated_flags(points);
    for (std::size_t i = 0; i < pooled.size(); ++i) out.push_back({*pooled[i], flags[i]});
  }
  return out;
}

struct GroupStats {
  std::string experiment;
  std::size_t n = 0;
  std::optional<SummaryStats> stats;  // empty when n == 0
};

struct SizeSpeedTables {
  std::vector<GroupStats> joints_of_fast;   // n_joints where speed > speed threshold
  std::vector<GroupStats> speed_of_large;   // speed where n_joints >= joints threshold
};

/// Threshold tables over the given rows (typically one generation pooled
/// across runs), one group per experiment in order of first appearance.
inline SizeSpeedTables size_speed_table(const std::vector<RobotRow>& rows, double speed_threshold,
                                        std::size_t joints_threshold) {
  if (rows.empty()) throw std::invalid_argument("size_speed_table needs rows");
  SizeSpeedTables t;
  for (const auto& exp : experiments_in(rows)) {
    std::vector<double> joints, speeds;
    for (const auto& r : rows) {
      if (r.experiment != exp) continue;
      if (r.speed_cms > speed_threshold) joints.push_back(static_cast<double>(r.n_joints));
      if (r.n_joints >= joints_threshold) speeds.push_back(r.speed_cms);
    }
    t.joints_of_fast.push_back({exp, joints.size(), summarize(joints)});
    t.speed_of_large.push_back({exp, speeds.size(), summarize(speeds)});
  }
  return t;
}

inline std::vector<RobotRow> final_generation(const std::vector<RobotRow>& rows) {
  std::vector<RobotRow> out;
  for (const auto& exp : experiments_in(rows)) {
    const auto last = last_generation(rows, exp);
    for (const auto& r : rows)
      if (r.experiment == exp && r.generation == last) out.push_back(r);
  }
  return out;
}

}  // namespace evobot
