#include "entroflow/flow.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "entroflow/errors.hpp"

namespace entroflow {

namespace {

double measured_mass(const Eigen::VectorXd& mass, const Eigen::VectorXd& u) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < mass.size(); ++i) acc += mass[i] * u[i];
  return acc;
}

}  // namespace

Stepper::Stepper(const LaplacianOperator& op, double dt, Scheme scheme)
    : manifold_(op.manifold_ptr()),
      measure_(op.measure()),
      dt_(dt),
      scheme_(scheme),
      mass_(op.mass()) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    fail(ErrorCode::flow, "step size must be positive");
  }
  const int n = op.size();
  Eigen::SparseMatrix<double> mass_mat(n, n);
  mass_mat.setIdentity();
  for (int i = 0; i < n; ++i) mass_mat.coeffRef(i, i) = mass_[i];
  const double implicit_weight =
      scheme_ == Scheme::implicit_euler ? dt_ : 0.5 * dt_;
  Eigen::SparseMatrix<double> lhs_mat =
      mass_mat + implicit_weight * op.stiffness();
  lhs_mat.makeCompressed();
  lhs_.compute(lhs_mat);
  if (lhs_.info() != Eigen::Success) {
    fail(ErrorCode::flow, "factorization of the implicit system failed");
  }
  if (scheme_ == Scheme::implicit_euler) {
    rhs_ = mass_mat;
  } else {
    rhs_ = mass_mat - 0.5 * dt_ * op.stiffness();
    rhs_.makeCompressed();
  }
}

void Stepper::step(FlowState& state) {
  require_same_manifold(state.u_tilde, *manifold_, "step");
  if (state.measure != measure_) {
    fail(ErrorCode::flow, "state measure does not match the operator");
  }
  Eigen::VectorXd& u = state.u_tilde.values;
  const double mass_in = measured_mass(mass_, u);
  if (!(mass_in > 0.0)) {
    fail(ErrorCode::flow, "state lost all mass");
  }
  Eigen::VectorXd next = lhs_.solve(rhs_ * u);

  const double mass_raw = measured_mass(mass_, next);
  const double drift = std::abs(mass_raw / mass_in - 1.0);
  stats_.max_raw_drift = std::max(stats_.max_raw_drift, drift);
  if (drift > 1e-10) {
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "mass drifted by %.3e in one step; conservative assembly "
                  "is broken",
                  drift);
    fail(ErrorCode::flow, buf);
  }

  double clamped = 0.0;
  for (Eigen::Index i = 0; i < next.size(); ++i) {
    if (next[i] < 0.0) {
      clamped -= mass_[i] * next[i];
      next[i] = 0.0;
    }
  }
  stats_.max_clamped_mass =
      std::max(stats_.max_clamped_mass, clamped / mass_in);

  const double mass_clamped = measured_mass(mass_, next);
  if (!(mass_clamped > 0.0)) {
    fail(ErrorCode::flow, "state lost all mass after clamping");
  }
  u = next * (mass_in / mass_clamped);
  state.time += dt_;
  ++stats_.steps;
}

void Stepper::run_steps(FlowState& state, long count) {
  for (long i = 0; i < count; ++i) step(state);
}

ScalarField heat_kernel(const SpectralData& spectrum,
                        const DiscreteManifold& manifold,
                        const KernelSpec& spec) {
  const int n = manifold.vertex_count();
  if (spectrum.eigenfields.rows() != n) {
    fail(ErrorCode::flow, "spectrum does not belong to this manifold");
  }
  if (spec.source_vertex < 0 || spec.source_vertex >= n) {
    fail(ErrorCode::flow, "source vertex out of range");
  }
  if (!(spec.t > 0.0)) {
    fail(ErrorCode::flow, "kernel time must be positive");
  }
  const int k = spectrum.count();
  const double omitted = static_cast<double>(n - k);
  const double tail = omitted * std::exp(-spectrum.first_omitted * spec.t);
  if (!(tail <= spec.truncation_tol)) {
    char buf[192];
    std::snprintf(buf, sizeof(buf),
                  "kernel tail bound %.3e exceeds %.3e at t=%g with %d of %d "
                  "modes; raise the mode count or start later",
                  tail, spec.truncation_tol, spec.t, k, n);
    fail(ErrorCode::kernel_truncation, buf);
  }

  ScalarField out;
  out.manifold_id = manifold.id();
  out.values = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < k; ++i) {
    const double amp = std::exp(-spectrum.eigenvalues[i] * spec.t) *
                       spectrum.eigenfields(spec.source_vertex, i);
    out.values += amp * spectrum.eigenfields.col(i);
  }
  for (int v = 0; v < n; ++v) {
    if (out.values[v] < 0.0) out.values[v] = 0.0;
  }
  const Eigen::VectorXd& w = manifold.measure_weights(spectrum.measure);
  double mass = 0.0;
  for (int v = 0; v < n; ++v) mass += w[v] * out.values[v];
  if (!(mass > 0.0)) {
    fail(ErrorCode::flow, "kernel synthesis produced no mass");
  }
  out.values /= mass;
  return out;
}

ScalarField sqrt_state(const ScalarField& u_tilde) {
  ScalarField out;
  out.manifold_id = u_tilde.manifold_id;
  out.values.resize(u_tilde.values.size());
  for (Eigen::Index i = 0; i < u_tilde.values.size(); ++i) {
    out.values[i] = std::sqrt(std::max(u_tilde.values[i], 0.0));
  }
  return out;
}

LogDensity log_density(const ScalarField& u_tilde,
                       const DiscreteManifold& manifold, Measure measure,
                       double tau) {
  require_same_manifold(u_tilde, manifold, "log_density");
  if (!(tau > 0.0)) {
    fail(ErrorCode::degenerate_density, "log coordinates need tau > 0");
  }
  const int n = manifold.vertex_count();
  const double peak = u_tilde.values.maxCoeff();
  if (!(peak > 0.0)) {
    fail(ErrorCode::degenerate_density, "density is not positive anywhere");
  }
  const double floor = 1e-14 * peak;

  LogDensity out;
  out.tau = tau;
  out.dim = measure == Measure::nu ? manifold.be_dimension()
                                   : static_cast<double>(manifold.dimension());
  out.f.manifold_id = manifold.id();
  out.f.values.resize(n);
  const double offset = 0.5 * out.dim * std::log(4.0 * M_PI * tau);
  const Eigen::VectorXd& w = manifold.measure_weights(measure);
  double masked_mass = 0.0;
  double total_mass = 0.0;
  for (int v = 0; v < n; ++v) {
    const double value = u_tilde.values[v];
    total_mass += w[v] * std::max(value, 0.0);
    if (!(value > floor)) {
      ++out.masked_count;
      masked_mass += w[v] * std::max(value, 0.0);
      out.f.values[v] = -std::log(floor) - offset;
    } else {
      out.f.values[v] = -std::log(value) - offset;
    }
  }
  out.masked_mass_fraction = total_mass > 0.0 ? masked_mass / total_mass : 1.0;
  return out;
}

}  // namespace entroflow
