#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cqed/g2_estimate.hpp"
#include "cqed/model.hpp"
#include "cqed/trajectory.hpp"

namespace cqed {

/// Built-in cross-checks of the trajectory engine against independent results.
std::vector<std::string_view> scenario_names();

struct ScenarioOptions {
  std::uint64_t samples{10000};
  std::uint64_t seed{1};
  unsigned workers{1};
};

struct ScenarioResult {
  std::string name;
  PhysicalParameters params;
  TrajectoryConfig config;
  G2Result trajectory;
  std::vector<std::pair<std::string, G2Curve>> references;  // e.g. "dense", "closed-form"
  double max_deviation{0.0};  // relative, worst over references and tau
  double tolerance{0.0};
  bool passed{false};
};

/// Throws std::invalid_argument for an unknown scenario.
ScenarioResult run_scenario(std::string_view name, const ScenarioOptions& opts = {});

}  // namespace cqed
