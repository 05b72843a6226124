#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "entroflow/manifold.hpp"
#include "entroflow/operators.hpp"

namespace entroflow {

/// Probability density against the operator's measure, tagged with the flow
/// time it represents.
struct FlowState {
  ScalarField u_tilde;
  double time = 0.0;
  Measure measure = Measure::mu;
};

enum class Scheme { implicit_euler, crank_nicolson };

struct StepStats {
  long steps = 0;
  /// Largest per-step relative mass deviation seen before renormalization.
  double max_raw_drift = 0.0;
  /// Largest per-step mass fraction removed by clamping negatives.
  double max_clamped_mass = 0.0;
};

/// Marches d/dt u = -(generalized Laplacian) u with a fixed step.  Each step
/// solves against a cached factorization, clamps stray negatives, and
/// renormalizes the total mass; both corrections are tracked and a raw drift
/// beyond the the scheme's round-off budget aborts the run.
class Stepper {
 public:
  Stepper(const LaplacianOperator& op, double dt, Scheme scheme);

  double dt() const { return dt_; }
  Scheme scheme() const { return scheme_; }
  const StepStats& stats() const { return stats_; }

  void step(FlowState& state);
  void run_steps(FlowState& state, long count);

 private:
  ManifoldPtr manifold_;
  Measure measure_;
  double dt_;
  Scheme scheme_;
  Eigen::VectorXd mass_;
  Eigen::SparseMatrix<double> rhs_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> lhs_;
  StepStats stats_;
};

struct KernelSpec {
  int source_vertex = 0;
  double t = 1.0;
  /// Cap on (omitted mode count) * exp(-first_omitted * t); a synthesis whose
  /// spectral tail could exceed it is refused.
  double truncation_tol = 1e-8;
};

/// Heat kernel row as a density: sum_i exp(-lambda_i t) phi_i(x0) phi_i(.),
/// clamped and mass-renormalized.  Unit mass against the spectrum's measure.
ScalarField heat_kernel(const SpectralData& spectrum,
                        const DiscreteManifold& manifold,
                        const KernelSpec& spec);

/// Pointwise square root of a clamped density.
ScalarField sqrt_state(const ScalarField& u_tilde);

/// Logarithmic coordinates of a density: u~ = (4 pi tau)^(-d/2) exp(-f) with
/// the dimension d of the reference Gaussian (topological dimension, or the
/// effective dimension on weighted manifolds).
struct LogDensity {
  ScalarField f;
  double tau = 0.0;
  double dim = 0.0;
  /// Vertices at or below the positivity floor, excluded from f's geometry.
  int masked_count = 0;
  /// Mass they carry, as a fraction of the total.
  double masked_mass_fraction = 0.0;
};

LogDensity log_density(const ScalarField& u_tilde,
                       const DiscreteManifold& manifold, Measure measure,
                       double tau);

}  // namespace entroflow
