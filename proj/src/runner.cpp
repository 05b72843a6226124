#include "entroflow/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "entroflow/errors.hpp"
#include "entroflow/euclidean.hpp"
#include "entroflow/flow.hpp"
#include "entroflow/svg.hpp"
#include "entroflow/trace_io.hpp"

namespace entroflow {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kMassTol = 1e-9;

bool is_sphere_kind(const ScenarioConfig& config) {
  return config.kind == ScenarioKind::sphere_kernel ||
         (config.kind == ScenarioKind::custom &&
          config.geometry.topology == "sphere");
}

bool is_weighted_kind(const ScenarioConfig& config) {
  return config.kind == ScenarioKind::weighted_torus ||
         (config.kind == ScenarioKind::custom && !is_sphere_kind(config) &&
          config.m > 0.0);
}

std::vector<double> effective_lengths(const ScenarioConfig& config) {
  if (!config.geometry.lengths.empty()) return config.geometry.lengths;
  return std::vector<double>(config.geometry.resolution.size(), kTwoPi);
}

void check_shift(double a, double lambda_1) {
  if (a > -lambda_1) return;
  char buf[192];
  std::snprintf(buf, sizeof(buf),
                "shift a = %g violates a > -lambda_1 = %g: the shifted "
                "energy omega = dirichlet + a must stay positive along the "
                "flow",
                a, -lambda_1);
  fail(ErrorCode::config, buf);
}

void check_trace_mass(const TraceTable& trace) {
  const int mc = trace.column("mass");
  for (const auto& row : trace.rows) {
    if (std::abs(row[mc] - 1.0) > kMassTol) {
      char buf[128];
      std::snprintf(buf, sizeof(buf),
                    "trace mass drifted to %.12g; budget is 1 +- %g", row[mc],
                    kMassTol);
      fail(ErrorCode::flow, buf);
    }
  }
}

std::vector<double> column_values(const TraceTable& trace,
                                  const std::string& name) {
  const int c = trace.column(name);
  std::vector<double> out;
  out.reserve(trace.rows.size());
  for (const auto& row : trace.rows) out.push_back(row[c]);
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io, "cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) fail(ErrorCode::io, "write to '" + path + "' failed");
}

}  // namespace

ScenarioSetup build_scenario(const ScenarioConfig& config) {
  ScenarioSetup setup;
  if (config.kind == ScenarioKind::euclidean_oracle) return setup;
  if (is_sphere_kind(config)) {
    setup.manifold = build_sphere(config.geometry.level,
                                  config.geometry.radius);
  } else {
    const std::vector<double> lengths = effective_lengths(config);
    ManifoldPtr base = build_flat_torus(config.geometry.resolution, lengths);
    if (is_weighted_kind(config)) {
      ScalarField h = constant_field(*base, 0.0);
      const double k0 = kTwoPi / lengths[0];
      for (int v = 0; v < base->vertex_count(); ++v) {
        h.values[v] =
            config.geometry.weight_amplitude * std::cos(k0 * base->positions()(v, 0));
      }
      setup.manifold = attach_weight(base, h, config.m);
    } else {
      setup.manifold = base;
    }
  }
  const Measure measure =
      setup.manifold->weighted() ? Measure::nu : Measure::mu;
  setup.op.emplace(assemble_laplacian(setup.manifold, measure));
  return setup;
}

double mesh_dx_sq(const ScenarioConfig& config) {
  if (config.kind == ScenarioKind::euclidean_oracle || is_sphere_kind(config))
    return 0.0;
  const std::vector<double> lengths = effective_lengths(config);
  double dx = 0.0;
  for (std::size_t a = 0; a < lengths.size(); ++a) {
    dx = std::max(dx, lengths[a] / config.geometry.resolution[a]);
  }
  return dx * dx;
}

TraceTable oracle_trace(int dim, double a, const std::vector<double>& times) {
  if (dim < 1 || dim > 3) {
    fail(ErrorCode::invalid_dimension,
         "flat-space oracle supports dimensions 1..3");
  }
  if (a < 0.0) {
    fail(ErrorCode::config,
         "flat-space oracle needs a >= 0: there is no spectral gap to spend");
  }
  TraceTable table;
  table.columns = {"t",     "mass",        "w",
                   "y0",    "ya",          "omega",
                   "dissipation", "w_dissipation", "rigidity_gap"};
  const double d = dim;
  for (double t : times) {
    if (!(t > 0.0)) fail(ErrorCode::config, "oracle times must be positive");
    const EuclideanEntropy closed = euclidean_closed(dim, t);
    const double omega = d / (8.0 * t) + a;
    const double ya =
        closed.entropy + 0.5 * d * std::log(omega) - 4.0 * a * t;
    table.rows.push_back({t, 1.0, 0.0, closed.y0, ya, omega,
                          euclidean_ya_rate(dim, t, a), 0.0, 0.0});
  }
  return table;
}

std::vector<std::string> verdict_names(const ScenarioConfig& config) {
  if (is_weighted_kind(config)) {
    return {"monotone-Ha", "monotone-W", "theoremB-equality"};
  }
  if (is_sphere_kind(config)) return {"monotone-Ya", "monotone-W"};
  return {"monotone-Ya", "monotone-W", "dissipation-inequality",
          "theoremA-equality"};
}

double verdict_tolerance(const ScenarioConfig& config,
                         const std::string& verdict) {
  const ToleranceFamily family = family_tolerances(config.kind);
  const bool absolute = config.kind == ScenarioKind::euclidean_oracle;
  if (verdict == "monotone-Ya" || verdict == "monotone-W" ||
      verdict == "monotone-Ha") {
    return family.monotone * config.tol_scale;
  }
  double c = 0.0;
  if (verdict == "theoremA-equality" || verdict == "theoremB-equality") {
    c = family.c_equality;
  } else if (verdict == "dissipation-inequality") {
    c = family.c_inequality;
  } else {
    fail(ErrorCode::config, "unknown verdict name '" + verdict + "'");
  }
  if (absolute) return c * config.tol_scale;
  return tolerance_budget(c, mesh_dx_sq(config), config.dt, config.tol_scale);
}

std::vector<Verdict> verify_trace(const ScenarioConfig& config,
                                  const TraceTable& trace) {
  std::vector<Verdict> out;
  for (const std::string& name : verdict_names(config)) {
    const double tol = verdict_tolerance(config, name);
    if (name == "monotone-Ya") {
      out.push_back(verify_monotone(trace, "ya", tol, name));
    } else if (name == "monotone-W") {
      out.push_back(verify_monotone(trace, "w", tol, name));
    } else if (name == "monotone-Ha") {
      out.push_back(verify_monotone(trace, "ha", tol, name));
    } else if (name == "dissipation-inequality") {
      out.push_back(verify_dissipation(trace, "ya", "dissipation", tol, name));
    } else {
      out.push_back(verify_rate_equality(trace, "w", "w_dissipation", tol,
                                         name));
    }
  }
  return out;
}

TraceTable run_trace_for(const ScenarioConfig& config, double* lambda_1) {
  if (lambda_1) *lambda_1 = 0.0;
  const std::vector<double> times = sample_times(config);
  if (config.kind == ScenarioKind::euclidean_oracle) {
    return oracle_trace(config.geometry.dimension, config.a, times);
  }
  const ScenarioSetup setup = build_scenario(config);
  EigOptions eig;
  eig.seed = config.seed;
  const SpectralData spectrum = low_spectrum(*setup.op, config.k, eig);
  check_shift(config.a, spectrum.first_nonzero);
  if (lambda_1) *lambda_1 = spectrum.first_nonzero;

  KernelSpec spec;
  spec.source_vertex = 0;
  spec.t = config.t_start;
  FlowState initial{heat_kernel(spectrum, *setup.manifold, spec),
                    config.t_start, setup.op->measure()};
  const StateProvider provider =
      stepping_provider(*setup.op, std::move(initial), config.dt,
                        config.scheme);
  TraceTable trace = run_trace(*setup.op, times, config.a, provider);
  check_trace_mass(trace);
  return trace;
}

RunResult run_scenario(const ScenarioConfig& config, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    fail(ErrorCode::io,
         "cannot create output directory '" + dir + "': " + ec.message());
  }

  RunResult result;
  result.dir = dir;
  result.kappa = is_sphere_kind(config)
                     ? 1.0 / (config.geometry.radius * config.geometry.radius)
                     : 0.0;

  const auto emit_manifest = [&](int status) {
    nlohmann::json doc;
    doc["config"] = nlohmann::json::parse(config_to_json_text(config));
    doc["computed"]["lambda_1"] = result.lambda_1;
    doc["computed"]["kappa"] = result.kappa;
    nlohmann::json tols;
    for (const std::string& name : verdict_names(config)) {
      tols[name] = verdict_tolerance(config, name);
    }
    doc["tolerances"] = tols;
    std::vector<std::string> files = result.files;
    files.push_back("manifest.json");
    std::sort(files.begin(), files.end());
    doc["files"] = files;
    doc["exit_status"] = status;
    write_text_file(dir + "/manifest.json", doc.dump(2) + "\n");
    result.files = std::move(files);
  };

  try {
    result.trace = run_trace_for(config, &result.lambda_1);
    result.verdicts = verify_trace(config, result.trace);

    write_trace_csv(dir + "/trace.csv", result.trace);
    result.files.push_back("trace.csv");

    std::string report;
    for (const Verdict& v : result.verdicts) {
      report += format_verdict(v);
      report += '\n';
    }
    write_text_file(dir + "/verdicts.txt", report);
    result.files.push_back("verdicts.txt");

    const std::vector<double> t = column_values(result.trace, "t");
    for (const char* col : {"w", "y0", "ya", "ha"}) {
      if (!result.trace.has_column(col)) continue;
      const std::string file = std::string("chart_") + col + ".svg";
      write_line_chart(dir + "/" + file, t, column_values(result.trace, col),
                       "t", col, config.name + ": " + col);
      result.files.push_back(file);
    }

    for (const Verdict& v : result.verdicts) {
      if (!v.pass) result.exit_status = 2;
    }
    emit_manifest(result.exit_status);
  } catch (const Error&) {
    try {
      emit_manifest(1);
    } catch (const Error&) {
      // the original failure is the one worth reporting
    }
    throw;
  }
  return result;
}

std::string spectrum_report(const ScenarioConfig& config) {
  if (config.kind == ScenarioKind::euclidean_oracle) {
    fail(ErrorCode::config,
         "the flat-space oracle has no discrete spectrum to report");
  }
  const ScenarioSetup setup = build_scenario(config);
  EigOptions eig;
  eig.seed = config.seed;
  const SpectralData spectrum = low_spectrum(*setup.op, config.k, eig);

  int multiplicity = 0;
  for (int i = 0; i < spectrum.count(); ++i) {
    if (std::abs(spectrum.eigenvalues[i] - spectrum.first_nonzero) <=
        0.01 * spectrum.first_nonzero) {
      ++multiplicity;
    }
  }

  char buf[160];
  std::string text;
  std::snprintf(buf, sizeof(buf), "vertices: %d\n",
                setup.manifold->vertex_count());
  text += buf;
  std::snprintf(buf, sizeof(buf), "computed eigenvalues: %d\n",
                spectrum.count());
  text += buf;
  std::snprintf(buf, sizeof(buf),
                "first_nonzero: %.12g  multiplicity %d  (index %d)\n",
                spectrum.first_nonzero, multiplicity,
                spectrum.first_nonzero_index);
  text += buf;
  text += "leading eigenvalues:\n";
  const int shown = std::min(spectrum.count(), 12);
  for (int i = 0; i < shown; ++i) {
    std::snprintf(buf, sizeof(buf), "  %3d: %.12g\n", i,
                  spectrum.eigenvalues[i]);
    text += buf;
  }
  return text;
}

}  // namespace entroflow
