#pragma once

#include <vector>

#include "entroflow/config.hpp"

namespace entroflow {

/// Per-family verdict tolerances.  For mesh scenarios the c_* constants
/// multiply (dx^2 + dt); the flat-space oracle has no mesh, so its entries
/// are absolute tolerances.
struct ToleranceFamily {
  double monotone = 1e-6;
  double c_equality = 1.0;
  double c_inequality = 1.0;
};

ToleranceFamily family_tolerances(ScenarioKind kind);

/// The calibrated, runnable scenario set for `run --all`.
std::vector<ScenarioConfig> registry_scenarios();

/// Calibrated scenario by name; throws a config error for unknown names.
ScenarioConfig registry_scenario(const std::string& name);

}  // namespace entroflow
