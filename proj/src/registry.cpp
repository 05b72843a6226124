#include "entroflow/registry.hpp"

#include "entroflow/errors.hpp"

namespace entroflow {

ToleranceFamily family_tolerances(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::euclidean_oracle:
      // Absolute: the oracle trace is exact up to rounding, except for the
      // sampled finite-difference slope in the inequality check.
      return {1e-12, 1e-8, 1e-8};
    case ScenarioKind::weighted_torus:
      return {1e-6, 8.0, 8.0};
    case ScenarioKind::torus_kernel:
    case ScenarioKind::sphere_kernel:
    case ScenarioKind::custom:
      return {1e-6, 5.0, 5.0};
  }
  fail(ErrorCode::config, "unknown scenario kind");
}

std::vector<ScenarioConfig> registry_scenarios() {
  std::vector<ScenarioConfig> out;

  {
    // Finer grid and a later window than the quick-start defaults: k then
    // covers the kernel at t_start and the trace stays clear of truncation.
    ScenarioConfig c = default_config(ScenarioKind::torus_kernel);
    c.name = "torus_kernel";
    c.geometry.resolution = {128, 128};
    c.a = 0.5;
    c.k = 320;
    c.dt = 0.0025;
    c.t_start = 0.5;
    c.t_end = 2.5;
    c.sample_count = 21;
    out.push_back(c);
  }
  {
    ScenarioConfig c = default_config(ScenarioKind::sphere_kernel);
    c.name = "sphere_kernel";
    out.push_back(c);
  }
  {
    ScenarioConfig c = default_config(ScenarioKind::weighted_torus);
    c.name = "weighted_torus";
    out.push_back(c);
  }
  {
    ScenarioConfig c = default_config(ScenarioKind::euclidean_oracle);
    c.name = "euclidean_oracle";
    out.push_back(c);
  }
  return out;
}

ScenarioConfig registry_scenario(const std::string& name) {
  for (const ScenarioConfig& c : registry_scenarios())
    if (c.name == name) return c;
  fail(ErrorCode::config,
       "unknown scenario \"" + name +
           "\"; registry has: torus_kernel, sphere_kernel, weighted_torus, "
           "euclidean_oracle");
}

}  // namespace entroflow
