#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <vector>

#include "entroflow/manifold.hpp"

namespace entroflow {

/// One undirected stiffness edge: the operator's quadratic form is
/// sum_e weight_e (u_i - u_j)(v_i - v_j).
struct StiffnessEdge {
  int i;
  int j;
  double weight;
};

/// Measure-weighted Laplacian in flux form.  The stiffness matrix S is
/// symmetric positive semidefinite with S 1 = 0, and u.S.u approximates the
/// Dirichlet energy of u against the operator's measure.  The generalized
/// eigenproblem S phi = lambda diag(mass) phi discretizes -Delta (measure mu)
/// or the drift Laplacian -(Delta - grad h . grad) (measure nu).
class LaplacianOperator {
 public:
  LaplacianOperator(ManifoldPtr manifold, Measure measure,
                    std::vector<StiffnessEdge> edges);

  const DiscreteManifold& manifold() const { return *manifold_; }
  ManifoldPtr manifold_ptr() const { return manifold_; }
  Measure measure() const { return measure_; }
  int size() const { return static_cast<int>(mass_.size()); }

  const Eigen::SparseMatrix<double>& stiffness() const { return stiffness_; }
  /// Lumped (diagonal) mass vector: the measure weights.
  const Eigen::VectorXd& mass() const { return mass_; }
  const std::vector<StiffnessEdge>& edges() const { return edges_; }

  /// Edge-wise evaluation of u.S.v.  Each term multiplies the two edge
  /// differences directly, so swapping u and v reproduces the identical
  /// floating-point result and the diagonal case is a sum of squares.
  double quadratic_form(const Eigen::VectorXd& u,
                        const Eigen::VectorXd& v) const;

 private:
  ManifoldPtr manifold_;
  Measure measure_;
  std::vector<StiffnessEdge> edges_;
  Eigen::SparseMatrix<double> stiffness_;
  Eigen::VectorXd mass_;
};

/// Builds the flux-form Laplacian: finite differences with edge-midpoint
/// measure factors on tori, linear-element cotangent weights on spheres.
LaplacianOperator assemble_laplacian(const ManifoldPtr& manifold,
                                     Measure measure);

struct SpectralData {
  /// Ascending eigenvalues of the generalized problem; eigenvalue 0 with a
  /// constant eigenfield comes first.
  Eigen::VectorXd eigenvalues;
  /// Columns are eigenfields, orthonormal against the operator's measure,
  /// signs fixed so the first non-negligible component is positive.
  Eigen::MatrixXd eigenfields;
  Measure measure = Measure::mu;
  double first_nonzero = 0.0;
  int first_nonzero_index = -1;
  /// Eigenvalue of the first pair NOT computed: exact when known analytically,
  /// the last computed eigenvalue as a conservative stand-in otherwise, and
  /// +infinity when the spectrum is complete.  Drives kernel truncation
  /// checks.
  double first_omitted = 0.0;

  int count() const { return static_cast<int>(eigenvalues.size()); }
};

struct EigOptions {
  /// Seed for the iterative solver's starting vectors.
  std::uint64_t seed = 42;
  /// Residual each returned eigenpair must satisfy, relative to the
  /// symmetrized operator's diagonal scale (so the eigenvalue error bound
  /// is residual_tol times that scale, zero modes included).
  double residual_tol = 1e-11;
  /// Subspace size cap; 0 picks max(2k+32, k+48) and grows on demand.
  int max_subspace = 0;
};

/// k smallest eigenpairs of the measure-weighted generalized problem.
/// Uniform-grid unweighted tori with k > n/4 take an exact closed-form
/// trigonometric route; everything else runs seeded shift-invert Lanczos
/// with full reorthogonalization.
SpectralData low_spectrum(const LaplacianOperator& op, int k,
                          const EigOptions& options = {});

/// Per-vertex gradient components: centered differences per axis on tori
/// (n x dim), area-averaged triangle gradients on spheres (n x 3).
Eigen::MatrixXd gradient(const ScalarField& field,
                         const DiscreteManifold& manifold);

/// Per-vertex squared gradient norm.  Integrating it against the operator's
/// measure is the canonical Dirichlet energy used by the entropy module.
ScalarField gradient_sq(const ScalarField& field, const LaplacianOperator& op);

/// Per-vertex symmetric second-difference Hessian, grid topologies only.
/// Entry (a, b) of vertex v sits at packed(v, a*dim + b).
struct HessianData {
  Eigen::MatrixXd packed;
  int dim = 0;
  double entry(int vertex, int a, int b) const {
    return packed(vertex, a * dim + b);
  }
};

HessianData hessian(const ScalarField& field, const LaplacianOperator& op);

/// Curvature quadratic form Ric(v, v) = (n-1) K |v|^2 for constant-curvature
/// models, evaluated on a per-vertex field of squared vector norms.
ScalarField ricci_form(const DiscreteManifold& manifold,
                       const ScalarField& v_sq);

/// Drift-corrected curvature form of a weighted manifold with effective
/// dimension m:
///   (n-1) K |grad f|^2 + grad f . Hess(h) grad f - (grad h . grad f)^2/(m-n)
/// evaluated per vertex.
ScalarField bakry_emery_form(const DiscreteManifold& manifold,
                             const Eigen::MatrixXd& grad_f,
                             const Eigen::MatrixXd& grad_h,
                             const HessianData& hess_h);

/// Debug dump of stiffness triplets as "row,col,value" lines.
void dump_operator_csv(const LaplacianOperator& op, std::ostream& out);

}  // namespace entroflow
