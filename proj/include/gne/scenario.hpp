#ifndef GNE_SCENARIO_HPP
#define GNE_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gne/gne.hpp"

namespace gne {

inline constexpr int kSchemaVersion = 1;

// N identical agents: R_ii = self_influence, R_ij = cross_influence.
struct HomogeneousSpec {
  int n_agents = 10;
  double self_influence = 20.0;
  double cross_influence = 1.0;
  double ret = 25.0;
  double budget = 3.0;
};

// Consecutive groups of agents that differ only in their return.
struct TwoGroupSpec {
  std::vector<int> group_sizes{5, 10};
  std::vector<double> group_returns{40.0, 25.0};
  double self_influence = 20.0;
  double cross_influence = 1.0;
  double budget = 3.0;
};

// R_ii = self_base + self_amplitude sin(i), r_i = return_base + return_slope i,
// with i = 1..N and the sine taken in radians.
struct HeterogeneousSineSpec {
  int n_agents = 10;
  double self_base = 20.0;
  double self_amplitude = 3.0;
  double cross_influence = 1.0;
  double return_base = 15.0;
  double return_slope = 2.0;
  double budget = 3.0;
};

struct CustomSpec {
  Matrix influence;
  Vector returns;
  Vector budgets;
  std::vector<int> group_labels;  // optional, 0-based
};

using ScenarioSpec = std::variant<HomogeneousSpec, TwoGroupSpec, HeterogeneousSineSpec, CustomSpec>;

const char* scenario_kind(const ScenarioSpec& spec);

struct BuiltScenario {
  SecurityGame game;
  std::optional<std::vector<int>> group_labels;
};

// Throws ConfigError for malformed parameters and when the generated game
// fails validate_game().
BuiltScenario build_scenario(const ScenarioSpec& spec);
// Same, without the validate_game() step.
BuiltScenario build_scenario_unchecked(const ScenarioSpec& spec);

// Same scenario with every attention budget replaced by `budget`.
ScenarioSpec with_budget(const ScenarioSpec& spec, double budget);

/// Fully resolved run configuration; its JSON echo reproduces a run exactly.
struct RunConfig {
  ScenarioSpec scenario = HomogeneousSpec{};
  GneConfig solver;
  int n_probes = 100;
  double support_eps = 1e-3;
  // Solve a second time at this (smaller) budget and report the agents that
  // only receive attention at the configured budget.
  std::optional<double> compare_budget;
  std::uint64_t rng_seed = 0;
};

// Parses the JSON config schema (see docs/config.md). Diagnostics name the
// offending field, or the line and column for syntax errors.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string config_to_json(const RunConfig& config);

// homogeneous, two-group, two-group-filling, heterogeneous.
std::vector<std::string> builtin_scenarios();
RunConfig builtin_config(const std::string& name);

}  // namespace gne

#endif  // GNE_SCENARIO_HPP
