#pragma once

#include <functional>
#include <string>
#include <vector>

#include "entroflow/entropy.hpp"
#include "entroflow/flow.hpp"
#include "entroflow/manifold.hpp"
#include "entroflow/operators.hpp"

namespace entroflow {

/// Sampled evolution of the entropy functionals.  Column sets depend on the
/// geometry: grid topologies carry the stencil-based rate and rigidity
/// columns, weighted runs replace the shifted entropies with their
/// effective-dimension variant.
struct TraceTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const;
  bool has_column(const std::string& name) const;
};

/// Produces the state to evaluate at a requested time.  Providers are called
/// with non-decreasing times.
using StateProvider = std::function<FlowState(double)>;

/// Synthesizes the state at each time from a precomputed spectrum.
StateProvider spectral_provider(SpectralData spectrum, ManifoldPtr manifold,
                                int source_vertex, double truncation_tol);

/// Marches the initial state forward with the given scheme; requested times
/// must land on whole steps.
StateProvider stepping_provider(const LaplacianOperator& op,
                                FlowState initial, double dt, Scheme scheme);

/// Evaluates the functional columns at each sample time, using the flow time
/// as the scale parameter.
TraceTable run_trace(const LaplacianOperator& op,
                     const std::vector<double>& times, double a,
                     const StateProvider& provider);

struct Verdict {
  std::string name;
  bool pass = false;
  double worst = 0.0;
  double tolerance = 0.0;
};

/// "name, PASS|FAIL, worst violation, tolerance"
std::string format_verdict(const Verdict& verdict);

/// Checks a column is non-increasing; the worst violation is the largest
/// upward jump between consecutive samples.
Verdict verify_monotone(const TraceTable& table, const std::string& column,
                        double tolerance, const std::string& name);

/// Checks -d(entropy)/dt >= rate between consecutive samples, comparing the
/// finite-difference slope against the trapezoid average of the rate
/// column.
Verdict verify_dissipation(const TraceTable& table,
                           const std::string& entropy_column,
                           const std::string& rate_column, double tolerance,
                           const std::string& name);

/// Checks -d(entropy)/dt == rate between consecutive samples, two-sided.
Verdict verify_rate_equality(const TraceTable& table,
                             const std::string& entropy_column,
                             const std::string& rate_column, double tolerance,
                             const std::string& name);

enum class RigidityClass { matches_shrinking_profile, generic };

RigidityClass classify_rigidity(double gap, double threshold);

/// Discretization-aware tolerance: c * (dx^2 + dt) * scale.
double tolerance_budget(double c, double dx_sq, double dt, double scale);

}  // namespace entroflow
