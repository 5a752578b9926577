#pragma once

// Run configuration: UTF-8 `key = value` lines, `#` starts a comment.
// Command-line overrides (`key=value`) are applied after the file.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "evobot/experiment.hpp"

namespace evobot {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  ExperimentSetup setup;
  std::vector<ExperimentMode> modes{ExperimentMode::Baseline, ExperimentMode::Battery};
  std::string output_dir = "out";
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_value(std::string_view key, std::string_view v) {
  T out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size())
    throw ConfigError("cannot parse value '" + std::string(v) + "' for key '" + std::string(key) + "'");
  return out;
}

using Setter = std::function<void(RunConfig&, std::string_view key, std::string_view value)>;

template <class T, class Project>
Setter set(Project proj) {
  return [proj](RunConfig& c, std::string_view k, std::string_view v) { proj(c) = parse_value<T>(k, v); };
}

inline const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"mu", set<std::size_t>([](RunConfig& c) -> auto& { return c.setup.evolution.mu; })},
      {"lambda", set<std::size_t>([](RunConfig& c) -> auto& { return c.setup.evolution.lambda; })},
      {"generations", set<std::size_t>([](RunConfig& c) -> auto& { return c.setup.evolution.generations; })},
      {"tournament_k", set<std::size_t>([](RunConfig& c) -> auto& { return c.setup.evolution.tournament_k; })},
      {"p_crossover", set<double>([](RunConfig& c) -> auto& { return c.setup.evolution.p_crossover; })},
      {"p_mutation", set<double>([](RunConfig& c) -> auto& { return c.setup.evolution.p_mutation; })},
      {"seed", set<std::uint64_t>([](RunConfig& c) -> auto& { return c.setup.evolution.master_seed; })},
      {"threads", set<std::size_t>([](RunConfig& c) -> auto& { return c.setup.evolution.threads; })},
      {"repetitions", set<std::size_t>([](RunConfig& c) -> auto& { return c.setup.repetitions; })},
      {"max_joints", set<std::size_t>([](RunConfig& c) -> auto& { return c.setup.limits.max_joints; })},
      {"max_bricks", set<std::size_t>([](RunConfig& c) -> auto& { return c.setup.limits.max_bricks; })},
      {"iterations", set<std::size_t>([](RunConfig& c) -> auto& { return c.setup.rewrite.iterations; })},
      {"max_string_length",
       set<std::size_t>([](RunConfig& c) -> auto& { return c.setup.rewrite.max_string_length; })},
      {"dt", set<double>([](RunConfig& c) -> auto& { return c.setup.sim.dt; })},
      {"duration", set<double>([](RunConfig& c) -> auto& { return c.setup.sim.duration; })},
      {"c_start", set<double>([](RunConfig& c) -> auto& { return c.setup.sim.c_start; })},
      {"module_length", set<double>([](RunConfig& c) -> auto& { return c.setup.sim.module_length; })},
      {"module_mass", set<double>([](RunConfig& c) -> auto& { return c.setup.sim.module_mass; })},
      {"beta", set<double>([](RunConfig& c) -> auto& { return c.setup.sim.beta; })},
      {"kappa", set<double>([](RunConfig& c) -> auto& { return c.setup.sim.kappa; })},
      {"gamma_t", set<double>([](RunConfig& c) -> auto& { return c.setup.sim.gamma_t; })},
      {"gamma_r", set<double>([](RunConfig& c) -> auto& { return c.setup.sim.gamma_r; })},
      {"omega_ref", set<double>([](RunConfig& c) -> auto& { return c.setup.sim.omega_ref; })},
      {"output_dir", [](RunConfig& c, std::string_view, std::string_view v) { c.output_dir = std::string(v); }},
      {"mode",
       [](RunConfig& c, std::string_view, std::string_view v) {
         if (v == "baseline") c.modes = {ExperimentMode::Baseline};
         else if (v == "battery") c.modes = {ExperimentMode::Battery};
         else if (v == "both") c.modes = {ExperimentMode::Baseline, ExperimentMode::Battery};
         else throw ConfigError("mode must be baseline, battery or both, got '" + std::string(v) + "'");
       }},
      {"survivor_selection",
       [](RunConfig& c, std::string_view, std::string_view v) {
         auto& s = c.setup.evolution.survivor_selection;
         if (v == "nsga2_truncation") s = SurvivorSelection::Nsga2Truncation;
         else if (v == "tournament") s = SurvivorSelection::Tournament;
         else throw ConfigError("survivor_selection must be nsga2_truncation or tournament");
       }},
  };
  return table;
}

inline void apply(RunConfig& cfg, std::string_view key, std::string_view value) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError("unknown config key '" + std::string(key) + "'");
  it->second(cfg, key, value);
}

inline void apply_line(RunConfig& cfg, std::string_view line, std::size_t line_no) {
  if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  line = trim(line);
  if (line.empty()) return;
  const auto eq = line.find('=');
  if (eq == std::string_view::npos)
    throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
  apply(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
}

}  // namespace detail

inline void validate(const RunConfig& cfg) {
  try {
    cfg.setup.evolution.validate();
    cfg.setup.sim.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (cfg.setup.rewrite.iterations < 1) throw ConfigError("iterations must be >= 1");
  if (cfg.setup.rewrite.max_string_length < 1) throw ConfigError("max_string_length must be >= 1");
  if (cfg.setup.repetitions < 1) throw ConfigError("repetitions must be >= 1");
  if (cfg.setup.evolution.generations < 1) throw ConfigError("generations must be >= 1");
}

/// Parses config text, then applies `key=value` overrides in order.
inline RunConfig parse_config(std::string_view text, const std::vector<std::string>& overrides = {}) {
  RunConfig cfg;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    detail::apply_line(cfg, text.substr(pos, end - pos), ++line_no);
    pos = end + 1;
  }
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + o + "' is not key=value");
    detail::apply(cfg, detail::trim(std::string_view(o).substr(0, eq)),
                  detail::trim(std::string_view(o).substr(eq + 1)));
  }
  validate(cfg);
  return cfg;
}

inline RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), overrides);
}

}  // namespace evobot
