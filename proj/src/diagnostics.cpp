#include "entroflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <utility>

#include "entroflow/errors.hpp"

namespace entroflow {

int TraceTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return static_cast<int>(i);
  }
  fail(ErrorCode::config, "trace has no column named '" + name + "'");
}

bool TraceTable::has_column(const std::string& name) const {
  return std::find(columns.begin(), columns.end(), name) != columns.end();
}

StateProvider spectral_provider(SpectralData spectrum, ManifoldPtr manifold,
                                int source_vertex, double truncation_tol) {
  auto data = std::make_shared<SpectralData>(std::move(spectrum));
  return [data, manifold, source_vertex, truncation_tol](double t) {
    KernelSpec spec;
    spec.source_vertex = source_vertex;
    spec.t = t;
    spec.truncation_tol = truncation_tol;
    FlowState state;
    state.u_tilde = heat_kernel(*data, *manifold, spec);
    state.time = t;
    state.measure = data->measure;
    return state;
  };
}

StateProvider stepping_provider(const LaplacianOperator& op,
                                FlowState initial, double dt, Scheme scheme) {
  auto stepper = std::make_shared<Stepper>(op, dt, scheme);
  auto state = std::make_shared<FlowState>(std::move(initial));
  return [stepper, state, dt](double t) {
    const double gap = t - state->time;
    if (gap < -1e-12) {
      fail(ErrorCode::flow, "stepping provider cannot move backwards");
    }
    const double raw = gap / dt;
    const long steps = std::lround(raw);
    if (std::abs(raw - static_cast<double>(steps)) > 1e-6) {
      char buf[128];
      std::snprintf(buf, sizeof(buf),
                    "sample time %g is not a whole number of steps away", t);
      fail(ErrorCode::flow, buf);
    }
    stepper->run_steps(*state, steps);
    state->time = t;  // absorb accumulated float drift in the time label
    return *state;
  };
}

TraceTable run_trace(const LaplacianOperator& op,
                     const std::vector<double>& times, double a,
                     const StateProvider& provider) {
  if (times.size() < 2) {
    fail(ErrorCode::config, "a trace needs at least two sample times");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      fail(ErrorCode::config, "sample times must increase");
    }
  }
  const DiscreteManifold& m = op.manifold();
  const bool weighted = op.measure() == Measure::nu;
  const bool stencils = m.topology() == Topology::flat_torus;
  const double d = effective_dim(op);

  TraceTable table;
  table.columns = {"t", "mass", "w"};
  if (weighted) {
    table.columns.push_back("ha");
  } else {
    table.columns.push_back("y0");
    table.columns.push_back("ya");
  }
  table.columns.push_back("omega");
  if (stencils) {
    if (!weighted) table.columns.push_back("dissipation");
    table.columns.push_back("w_dissipation");
    if (!weighted) table.columns.push_back("rigidity_gap");
  }

  for (double t : times) {
    FlowState state = provider(t);
    require_same_manifold(state.u_tilde, m, "run_trace");
    if (state.measure != op.measure()) {
      fail(ErrorCode::flow, "provider state measure mismatch");
    }
    const double mass = integrate(state.u_tilde, m, op.measure());
    const ScalarField u = sqrt_state(state.u_tilde);
    const EntropyTerms terms = entropy_terms(u, op);
    const double omega = terms.dirichlet + a;

    std::vector<double> row;
    row.push_back(t);
    row.push_back(mass);
    row.push_back(w_entropy(terms, d, t));
    if (weighted) {
      row.push_back(adjusted_ya(terms, d, a, t));
    } else {
      row.push_back(log_entropy_y0(terms, d));
      row.push_back(adjusted_ya(terms, d, a, t));
    }
    row.push_back(omega);
    if (stencils) {
      const LogDensity ld = log_density(state.u_tilde, m, op.measure(), t);
      if (weighted) {
        row.push_back(weighted_dissipation(state.u_tilde, ld, op).rate);
      } else {
        row.push_back(ya_dissipation(u, op, a).rate);
        row.push_back(w_dissipation(state.u_tilde, ld, op));
        row.push_back(rigidity_gap(state.u_tilde, ld, op));
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string format_verdict(const Verdict& verdict) {
  char buf[192];
  std::snprintf(buf, sizeof(buf), "%s, %s, %.6e, %.6e",
                verdict.name.c_str(), verdict.pass ? "PASS" : "FAIL",
                verdict.worst, verdict.tolerance);
  return std::string(buf);
}

Verdict verify_monotone(const TraceTable& table, const std::string& column,
                        double tolerance, const std::string& name) {
  const int c = table.column(column);
  Verdict v;
  v.name = name;
  v.tolerance = tolerance;
  v.worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    v.worst = std::max(v.worst, table.rows[i][c] - table.rows[i - 1][c]);
  }
  v.pass = v.worst <= tolerance;
  return v;
}

Verdict verify_dissipation(const TraceTable& table,
                           const std::string& entropy_column,
                           const std::string& rate_column, double tolerance,
                           const std::string& name) {
  const int tc = table.column("t");
  const int ec = table.column(entropy_column);
  const int rc = table.column(rate_column);
  Verdict v;
  v.name = name;
  v.tolerance = tolerance;
  v.worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    const double dt = table.rows[i][tc] - table.rows[i - 1][tc];
    const double slope = (table.rows[i][ec] - table.rows[i - 1][ec]) / dt;
    const double rate = 0.5 * (table.rows[i][rc] + table.rows[i - 1][rc]);
    // need -slope >= rate: violation is rate + slope
    v.worst = std::max(v.worst, rate + slope);
  }
  v.pass = v.worst <= tolerance;
  return v;
}

Verdict verify_rate_equality(const TraceTable& table,
                             const std::string& entropy_column,
                             const std::string& rate_column, double tolerance,
                             const std::string& name) {
  const int tc = table.column("t");
  const int ec = table.column(entropy_column);
  const int rc = table.column(rate_column);
  Verdict v;
  v.name = name;
  v.tolerance = tolerance;
  v.worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    const double dt = table.rows[i][tc] - table.rows[i - 1][tc];
    const double slope = (table.rows[i][ec] - table.rows[i - 1][ec]) / dt;
    const double rate = 0.5 * (table.rows[i][rc] + table.rows[i - 1][rc]);
    v.worst = std::max(v.worst, std::abs(rate + slope));
  }
  v.pass = v.worst <= tolerance;
  return v;
}

RigidityClass classify_rigidity(double gap, double threshold) {
  if (!(threshold > 0.0)) {
    fail(ErrorCode::config, "rigidity threshold must be positive");
  }
  return gap <= threshold ? RigidityClass::matches_shrinking_profile
                          : RigidityClass::generic;
}

double tolerance_budget(double c, double dx_sq, double dt, double scale) {
  return c * (dx_sq + dt) * scale;
}

}  // namespace entroflow
