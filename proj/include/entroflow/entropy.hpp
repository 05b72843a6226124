#pragma once

#include "entroflow/flow.hpp"
#include "entroflow/manifold.hpp"
#include "entroflow/operators.hpp"

namespace entroflow {

/// The two integrals every entropy functional is built from, evaluated for a
/// unit-mass sqrt-density u against the operator's measure:
///   entropy   = -integral u^2 log u^2
///   dirichlet =  integral |grad u|^2
struct EntropyTerms {
  double entropy = 0.0;
  double dirichlet = 0.0;
};

/// Computes both terms, refusing states whose mass differs from 1 by more
/// than 1e-8.
EntropyTerms entropy_terms(const ScalarField& u, const LaplacianOperator& op);

/// Reference-Gaussian dimension used in the functionals: the topological
/// dimension, or the effective dimension when the operator carries the
/// weighted measure.
double effective_dim(const LaplacianOperator& op);

/// Scale-dependent entropy of the density at scale tau:
///   W = entropy + 4 tau dirichlet - (d/2) log(4 pi tau) - d.
/// Writing the Dirichlet term through |grad u|^2 keeps W consistent with the
/// logarithmic-coordinate form at the discrete level.
double w_entropy(const EntropyTerms& terms, double d, double tau);
double w_entropy(const ScalarField& u, const LaplacianOperator& op,
                 double tau);

/// Scale-invariant logarithmic entropy: entropy + (d/2) log(dirichlet).
double log_entropy_y0(const EntropyTerms& terms, double d);
double log_entropy_y0(const ScalarField& u, const LaplacianOperator& op);

/// Shifted variant: entropy + (d/2) log(dirichlet + a).  The shifted energy
/// omega = dirichlet + a must be positive.
double log_entropy_ya(const EntropyTerms& terms, double d, double a);
double log_entropy_ya(const ScalarField& u, const LaplacianOperator& op,
                      double a);

/// Time-adjusted shifted entropy: log_entropy_ya - 4 a t.  Monotone
/// non-increasing along the flow on the model geometries.
double adjusted_ya(const EntropyTerms& terms, double d, double a, double t);
double adjusted_ya(const ScalarField& u, const LaplacianOperator& op,
                   double a, double t);

/// Weighted-manifold analogue of adjusted_ya with the effective dimension;
/// requires the weighted measure.
double weighted_ha(const ScalarField& u, const LaplacianOperator& op,
                   double a, double t);

/// Minimum of the scale trade-off s -> omega s - (d/2) log s.
struct ScaleMinimum {
  double s_star = 0.0;
  double value = 0.0;
};
ScaleMinimum scale_tradeoff_min(double omega, double d);

/// Additive constant in the sharp lower bound for the scale-dependent
/// entropy: -(d/2) log(pi) - (d/2)(1 + log(d/2)).
double lower_bound_offset(double d);

/// Sharp lower bound of W over all scales, at shift a:
///   entropy + (d/2) log(omega) - d a / (2 omega) + lower_bound_offset(d).
/// Attained exactly at tau = d / (8 omega).
double entropy_lower_bound(const EntropyTerms& terms, double d, double a);
double entropy_lower_bound(const ScalarField& u, const LaplacianOperator& op,
                           double a);

/// Dissipation rate of the scale-dependent entropy at scale tau:
///   integral 2 tau (|Hess f - g/(2 tau)|^2 + Ric(grad f, grad f)) u~.
/// Grid topologies only (second-difference stencils).
double w_dissipation(const ScalarField& u_tilde, const LogDensity& ld,
                     const LaplacianOperator& op);

/// Dissipation rate functional of the adjusted shifted entropy, evaluated in
/// the coordinates fbar = -2 log u at the matched scale tau = d/(8 omega):
///   (d / (4 omega)) integral (|Hess fbar - (4 omega/d) g|^2 + Ric) u~.
/// form_gap reports the largest pointwise difference between the
/// log-coordinate integrand and its algebraically expanded u-coordinate
/// form; it is a coefficient/sign self-check, not a discretization bound.
struct YaDissipation {
  double rate = 0.0;
  double omega = 0.0;
  double form_gap = 0.0;
};
YaDissipation ya_dissipation(const ScalarField& u,
                             const LaplacianOperator& op, double a);

/// Weighted-flow dissipation rate at scale tau, split into the curvature
/// bracket and the drift completion term:
///   bracket = integral 2 tau (|Hess f - g/(2 tau)|^2 + Ric_be(grad f)) u~
///   drift   = integral (sqrt(2 tau/(m-n)) grad h . grad f
///             + sqrt((m-n)/(2 tau)))^2 u~
struct WeightedDissipation {
  double rate = 0.0;
  double bracket = 0.0;
  double drift = 0.0;
  double tau = 0.0;
};
WeightedDissipation weighted_dissipation(const ScalarField& u_tilde,
                                         const LogDensity& ld,
                                         const LaplacianOperator& op);

/// Same rate at the matched scale tau = m/(8 omega) for the shifted-entropy
/// comparison.
WeightedDissipation weighted_dissipation_omega(const ScalarField& u,
                                               const LaplacianOperator& op,
                                               double a);

/// Scale-matched Hessian defect integral measuring distance from a
/// self-similarly shrinking profile:
///   integral |Hess f - g/(2 tau)|^2 u~.
double rigidity_gap(const ScalarField& u_tilde, const LogDensity& ld,
                    const LaplacianOperator& op);

}  // namespace entroflow
