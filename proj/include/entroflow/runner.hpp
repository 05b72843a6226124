#pragma once

#include <optional>
#include <string>
#include <vector>

#include "entroflow/config.hpp"
#include "entroflow/diagnostics.hpp"
#include "entroflow/operators.hpp"
#include "entroflow/registry.hpp"

namespace entroflow {

/// Geometry and operator realized from a validated config.  The flat-space
/// oracle has no mesh, so both handles stay empty for it.
struct ScenarioSetup {
  ManifoldPtr manifold;
  std::optional<LaplacianOperator> op;
};

ScenarioSetup build_scenario(const ScenarioConfig& config);

/// Squared mesh scale entering the tolerance budget: the largest grid
/// spacing squared.  Zero for the oracle and for spheres, whose verdicts
/// use absolute tolerances.
double mesh_dx_sq(const ScenarioConfig& config);

/// Closed-form flat-space trace with the full grid column set.
TraceTable oracle_trace(int dim, double a, const std::vector<double>& times);

/// Verdict names checked for a config's geometry, in report order.
std::vector<std::string> verdict_names(const ScenarioConfig& config);

/// Effective tolerance of one named verdict under the config's family and
/// tol_scale.
double verdict_tolerance(const ScenarioConfig& config,
                         const std::string& verdict);

/// Applies the config's verdict set to a trace, stored or fresh.
std::vector<Verdict> verify_trace(const ScenarioConfig& config,
                                  const TraceTable& trace);

struct RunResult {
  TraceTable trace;
  std::vector<Verdict> verdicts;
  /// Emitted files, relative to dir, manifest included.
  std::vector<std::string> files;
  double lambda_1 = 0.0;
  double kappa = 0.0;
  /// 0 all verdicts pass, 2 some verdict failed.
  int exit_status = 0;
  std::string dir;
};

/// Full pipeline: build, spectral start, stepping, trace, verdicts, and
/// artifact emission (trace.csv, verdicts.txt, one chart per entropy
/// column, manifest.json) into `dir`.
RunResult run_scenario(const ScenarioConfig& config, const std::string& dir);

/// Computes the trace only, without touching the filesystem.
TraceTable run_trace_for(const ScenarioConfig& config, double* lambda_1);

/// Text block for the `spectrum` subcommand: leading eigenvalues plus the
/// first nonzero one with its multiplicity.
std::string spectrum_report(const ScenarioConfig& config);

}  // namespace entroflow
