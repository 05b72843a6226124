#include "entroflow/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "entroflow/errors.hpp"

namespace entroflow {

namespace {

using nlohmann::json;

constexpr double kTwoPi = 6.283185307179586476925286766559;

const char* const kTopKeys[] = {"kind", "name",         "a",   "m",
                                "scheme", "dt",         "t_start",
                                "t_end",  "sample_count", "k", "seed",
                                "tol_scale", "out",     "geometry"};
const char* const kGeomKeys[] = {"topology", "resolution", "lengths",
                                 "level",    "radius",     "weight_amplitude",
                                 "dimension"};

template <std::size_t N>
std::string key_list(const char* const (&keys)[N]) {
  std::string out;
  for (std::size_t i = 0; i < N; ++i) {
    if (i > 0) out += ", ";
    out += keys[i];
  }
  return out;
}

template <std::size_t N>
void reject_unknown(const json& j, const char* const (&keys)[N],
                    const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : keys) {
      if (it.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) {
      fail(ErrorCode::config, "unknown " + where + " key '" + it.key() +
                                  "'; valid keys: " + key_list(keys));
    }
  }
}

template <typename T>
void take(const json& j, const char* key, T& into) {
  if (!j.contains(key)) return;
  try {
    into = j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::config,
         std::string("config key '") + key + "' has the wrong type");
  }
}

ScenarioConfig config_from_json(const json& doc) {
  if (!doc.is_object()) {
    fail(ErrorCode::config, "config must be a single JSON object");
  }
  reject_unknown(doc, kTopKeys, "config");
  ScenarioKind kind = ScenarioKind::torus_kernel;
  if (doc.contains("kind")) {
    std::string name;
    take(doc, "kind", name);
    kind = kind_from_name(name);
  }
  ScenarioConfig config = default_config(kind);
  take(doc, "name", config.name);
  take(doc, "a", config.a);
  take(doc, "m", config.m);
  if (doc.contains("scheme")) {
    std::string name;
    take(doc, "scheme", name);
    config.scheme = scheme_from_name(name);
  }
  take(doc, "dt", config.dt);
  take(doc, "t_start", config.t_start);
  take(doc, "t_end", config.t_end);
  take(doc, "sample_count", config.sample_count);
  take(doc, "k", config.k);
  take(doc, "seed", config.seed);
  take(doc, "tol_scale", config.tol_scale);
  take(doc, "out", config.out);
  if (doc.contains("geometry")) {
    const json& g = doc.at("geometry");
    if (!g.is_object()) {
      fail(ErrorCode::config, "geometry must be a JSON object");
    }
    reject_unknown(g, kGeomKeys, "geometry");
    take(g, "topology", config.geometry.topology);
    take(g, "resolution", config.geometry.resolution);
    take(g, "lengths", config.geometry.lengths);
    take(g, "level", config.geometry.level);
    take(g, "radius", config.geometry.radius);
    take(g, "weight_amplitude", config.geometry.weight_amplitude);
    take(g, "dimension", config.geometry.dimension);
  }
  return config;
}

void apply_override(json& doc, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) {
    fail(ErrorCode::config, "override '" + spec + "' is not key=value");
  }
  const std::string path = spec.substr(0, eq);
  const std::string text = spec.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::exception&) {
    value = text;  // bare words are strings
  }
  json* slot = &doc;
  std::stringstream parts(path);
  std::string key;
  std::vector<std::string> chain;
  while (std::getline(parts, key, '.')) {
    if (key.empty()) {
      fail(ErrorCode::config, "override path '" + path + "' is malformed");
    }
    chain.push_back(key);
  }
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    slot = &(*slot)[chain[i]];
  }
  (*slot)[chain.back()] = value;
}

ScenarioConfig from_document(json doc,
                             const std::vector<std::string>& overrides) {
  for (const std::string& spec : overrides) {
    apply_override(doc, spec);
  }
  ScenarioConfig config = config_from_json(doc);
  validate_config(config);
  return config;
}

int base_dimension(const ScenarioConfig& config) {
  return static_cast<int>(config.geometry.resolution.size());
}

bool is_grid_kind(const ScenarioConfig& config) {
  if (config.kind == ScenarioKind::torus_kernel ||
      config.kind == ScenarioKind::weighted_torus) {
    return true;
  }
  return config.kind == ScenarioKind::custom &&
         config.geometry.topology == "flat_torus";
}

}  // namespace

const char* kind_name(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::torus_kernel: return "torus_kernel";
    case ScenarioKind::sphere_kernel: return "sphere_kernel";
    case ScenarioKind::weighted_torus: return "weighted_torus";
    case ScenarioKind::euclidean_oracle: return "euclidean_oracle";
    case ScenarioKind::custom: return "custom";
  }
  fail(ErrorCode::config, "unrepresentable scenario kind");
}

ScenarioKind kind_from_name(const std::string& name) {
  for (ScenarioKind kind :
       {ScenarioKind::torus_kernel, ScenarioKind::sphere_kernel,
        ScenarioKind::weighted_torus, ScenarioKind::euclidean_oracle,
        ScenarioKind::custom}) {
    if (name == kind_name(kind)) return kind;
  }
  fail(ErrorCode::config,
       "unknown scenario kind '" + name +
           "'; valid kinds: torus_kernel, sphere_kernel, weighted_torus, "
           "euclidean_oracle, custom");
}

const char* scheme_name(Scheme scheme) {
  return scheme == Scheme::implicit_euler ? "implicit_euler"
                                          : "crank_nicolson";
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "implicit_euler") return Scheme::implicit_euler;
  if (name == "crank_nicolson") return Scheme::crank_nicolson;
  fail(ErrorCode::config,
       "unknown scheme '" + name +
           "'; valid schemes: implicit_euler, crank_nicolson");
}

ScenarioConfig default_config(ScenarioKind kind) {
  ScenarioConfig config;
  config.kind = kind;
  config.name = kind_name(kind);
  switch (kind) {
    case ScenarioKind::torus_kernel:
    case ScenarioKind::custom:
      break;
    case ScenarioKind::sphere_kernel:
      config.geometry.level = 4;
      config.geometry.radius = 1.0;
      config.a = 0.5;
      config.k = 450;
      config.dt = 0.0025;
      config.t_start = 0.1;
      config.t_end = 1.6;
      config.sample_count = 16;
      break;
    case ScenarioKind::weighted_torus:
      config.m = 4.0;
      config.a = 0.2;
      config.k = 512;
      config.dt = 0.0025;
      config.t_start = 0.3;
      config.t_end = 1.5;
      config.sample_count = 25;
      break;
    case ScenarioKind::euclidean_oracle:
      config.a = 0.25;
      config.t_start = 0.05;
      config.t_end = 10.0;
      config.sample_count = 40;
      break;
  }
  return config;
}

ScenarioConfig parse_config(const std::string& path,
                            const std::vector<std::string>& overrides) {
  json doc = json::object();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) {
      fail(ErrorCode::io, "cannot open config file '" + path + "'");
    }
    try {
      in >> doc;
    } catch (const json::exception& e) {
      fail(ErrorCode::config,
           "config file '" + path + "' is not valid JSON: " + e.what());
    }
  }
  return from_document(std::move(doc), overrides);
}

ScenarioConfig parse_config_text(const std::string& text,
                                 const std::vector<std::string>& overrides) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::config, std::string("config is not valid JSON: ") +
                                e.what());
  }
  return from_document(std::move(doc), overrides);
}

void validate_config(const ScenarioConfig& config) {
  if (!(config.t_start < config.t_end)) {
    fail(ErrorCode::config, "config needs t_start < t_end");
  }
  if (config.sample_count < 2) {
    fail(ErrorCode::config, "config needs sample_count >= 2");
  }
  if (!(config.t_start > 0.0)) {
    fail(ErrorCode::config, "config needs t_start > 0");
  }
  if (!(config.tol_scale > 0.0)) {
    fail(ErrorCode::config, "config needs tol_scale > 0");
  }
  if (config.kind == ScenarioKind::euclidean_oracle) {
    const int n = config.geometry.dimension;
    if (n < 1 || n > 3) {
      fail(ErrorCode::invalid_dimension,
           "flat-space oracle supports dimensions 1..3");
    }
    if (config.a < 0.0) {
      fail(ErrorCode::config,
           "flat-space oracle needs a >= 0: there is no spectral gap to "
           "spend");
    }
    return;
  }
  if (!(config.dt > 0.0)) {
    fail(ErrorCode::config, "config needs dt > 0");
  }
  const double span = config.t_end - config.t_start;
  if (config.dt > span / config.sample_count) {
    fail(ErrorCode::config,
         "config needs dt <= (t_end - t_start) / sample_count");
  }
  const double gap = span / (config.sample_count - 1);
  const double steps = gap / config.dt;
  if (std::abs(steps - std::round(steps)) > 1e-6 * steps) {
    fail(ErrorCode::config,
         "dt must divide the sample spacing so samples land on whole steps");
  }
  if (config.k < 2) {
    fail(ErrorCode::config, "config needs k >= 2 spectrum modes");
  }
  if (config.kind == ScenarioKind::custom &&
      config.geometry.topology != "flat_torus" &&
      config.geometry.topology != "sphere") {
    fail(ErrorCode::config,
         "custom geometry.topology must be flat_torus or sphere");
  }
  if (is_grid_kind(config)) {
    const std::size_t dims = config.geometry.resolution.size();
    if (dims < 1 || dims > 3) {
      fail(ErrorCode::invalid_dimension,
           "flat torus resolution must list 1..3 axes");
    }
    if (!config.geometry.lengths.empty() &&
        config.geometry.lengths.size() != dims) {
      fail(ErrorCode::config,
           "geometry.lengths must match the resolution's axis count");
    }
  } else if (config.kind == ScenarioKind::sphere_kernel ||
             (config.kind == ScenarioKind::custom &&
              config.geometry.topology == "sphere")) {
    if (config.geometry.level < 1 || config.geometry.level > 8) {
      fail(ErrorCode::config, "sphere level must be in 1..8");
    }
    if (!(config.geometry.radius > 0.0)) {
      fail(ErrorCode::config, "sphere radius must be positive");
    }
  }
  const bool wants_weight =
      config.kind == ScenarioKind::weighted_torus ||
      (config.kind == ScenarioKind::custom && config.m > 0.0);
  if (wants_weight) {
    if (!is_grid_kind(config)) {
      fail(ErrorCode::unsupported_topology,
           "weighted runs need a flat torus");
    }
    if (!(config.m > base_dimension(config))) {
      fail(ErrorCode::invalid_dimension,
           "weighted scenario needs m strictly above the base dimension");
    }
  }
}

std::string config_to_json_text(const ScenarioConfig& config) {
  json g;
  g["topology"] = config.geometry.topology;
  g["resolution"] = config.geometry.resolution;
  std::vector<double> lengths = config.geometry.lengths;
  if (lengths.empty()) {
    lengths.assign(config.geometry.resolution.size(), kTwoPi);
  }
  g["lengths"] = lengths;
  g["level"] = config.geometry.level;
  g["radius"] = config.geometry.radius;
  g["weight_amplitude"] = config.geometry.weight_amplitude;
  g["dimension"] = config.geometry.dimension;

  json doc;
  doc["name"] = config.name;
  doc["kind"] = kind_name(config.kind);
  doc["a"] = config.a;
  doc["m"] = config.m;
  doc["scheme"] = scheme_name(config.scheme);
  doc["dt"] = config.dt;
  doc["t_start"] = config.t_start;
  doc["t_end"] = config.t_end;
  doc["sample_count"] = config.sample_count;
  doc["k"] = config.k;
  doc["seed"] = config.seed;
  doc["tol_scale"] = config.tol_scale;
  doc["out"] = config.out;
  doc["geometry"] = g;
  return doc.dump(2);
}

std::vector<double> sample_times(const ScenarioConfig& config) {
  std::vector<double> times;
  const double gap =
      (config.t_end - config.t_start) / (config.sample_count - 1);
  for (int i = 0; i < config.sample_count; ++i) {
    times.push_back(config.t_start + gap * i);
  }
  times.back() = config.t_end;
  return times;
}

}  // namespace entroflow
