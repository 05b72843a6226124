#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "entroflow/flow.hpp"

namespace entroflow {

enum class ScenarioKind {
  torus_kernel,
  sphere_kernel,
  weighted_torus,
  euclidean_oracle,
  custom
};

const char* kind_name(ScenarioKind kind);
ScenarioKind kind_from_name(const std::string& name);

const char* scheme_name(Scheme scheme);
Scheme scheme_from_name(const std::string& name);

struct GeometryConfig {
  std::string topology = "flat_torus";  // custom scenarios only
  std::vector<int> resolution = {64, 64};
  std::vector<double> lengths;  // defaults to 2*pi per axis
  int level = 4;
  double radius = 1.0;
  double weight_amplitude = 0.3;
  int dimension = 2;  // flat-space oracle
};

/// One runnable scenario.  Defaults are the documented minimal-config
/// values; the registry carries the calibrated parameter sets.
struct ScenarioConfig {
  std::string name = "custom";
  ScenarioKind kind = ScenarioKind::torus_kernel;
  double a = 0.0;
  double m = 0.0;  // Bakry-Emery dimension, used when > 0
  Scheme scheme = Scheme::crank_nicolson;
  double dt = 0.01;
  double t_start = 0.05;
  double t_end = 2.0;
  int sample_count = 40;
  int k = 512;
  std::uint64_t seed = 42;
  double tol_scale = 1.0;
  std::string out;
  GeometryConfig geometry;
};

/// Documented defaults for a given kind, before any file or override.
ScenarioConfig default_config(ScenarioKind kind);

/// Loads the JSON config file (empty path = pure defaults), applies
/// `key=value` overrides (dotted paths reach into geometry), validates.
ScenarioConfig parse_config(const std::string& path,
                            const std::vector<std::string>& overrides);

/// Same, from an in-memory JSON document.
ScenarioConfig parse_config_text(const std::string& text,
                                 const std::vector<std::string>& overrides);

/// Structural checks that need no spectrum; throws config errors.
void validate_config(const ScenarioConfig& config);

/// Full effective config as a JSON document (the manifest echo).
std::string config_to_json_text(const ScenarioConfig& config);

/// Uniform sample times t_start..t_end inclusive.
std::vector<double> sample_times(const ScenarioConfig& config);

}  // namespace entroflow
