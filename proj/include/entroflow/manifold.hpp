#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <memory>
#include <ostream>
#include <vector>

#include "entroflow/errors.hpp"

namespace entroflow {

enum class Topology { flat_torus, sphere };

/// Which volume weights an integral or operator uses: the Riemannian measure
/// mu, or the weighted measure nu = e^{-h} mu attached by attach_weight().
enum class Measure { mu, nu };

const char* topology_name(Topology t);
const char* measure_name(Measure m);

struct CurvatureModel {
  enum class Kind { constant_sectional, weighted_derived };
  Kind kind = Kind::constant_sectional;
  /// Constant sectional curvature K of the underlying model space
  /// (0 for flat tori, 1/r^2 for spheres).  weighted_derived keeps the base
  /// value; drift corrections are assembled separately from the weight field.
  double sectional = 0.0;
};

class DiscreteManifold;
using ManifoldPtr = std::shared_ptr<const DiscreteManifold>;

/// One double per vertex, tagged with the manifold it lives on so mixed-mesh
/// bugs fail loudly instead of silently integrating garbage.
struct ScalarField {
  Eigen::VectorXd values;
  std::uint64_t manifold_id = 0;
};

/// Immutable vertex-weighted discretization of a model manifold.
///
/// Flat tori store chart coordinates on [0,L_a) per axis with periodic
/// indexing; spheres store a 3D embedding of an icosphere triangulation.
/// Vertex measures are lumped: uniform cell volumes on grids, one third of
/// the incident triangle area on spheres.
class DiscreteManifold {
 public:
  int dimension() const { return dimension_; }
  Topology topology() const { return topology_; }
  int vertex_count() const { return static_cast<int>(mu_.size()); }
  std::uint64_t id() const { return id_; }

  /// vertex_count x dimension chart coordinates (torus) or vertex_count x 3
  /// embedding (sphere).
  const Eigen::MatrixXd& positions() const { return positions_; }

  const Eigen::VectorXd& mu() const { return mu_; }
  /// Weighted vertex measure; identical to mu() until attach_weight().
  const Eigen::VectorXd& nu() const { return nu_; }
  const Eigen::VectorXd& measure_weights(Measure m) const {
    return m == Measure::mu ? mu_ : nu_;
  }

  bool weighted() const { return weighted_; }
  /// Weight potential h with nu = e^{-h} mu.  Only valid when weighted().
  const ScalarField& weight_field() const;
  /// Effective dimension m > n of the weighted comparison geometry.
  double be_dimension() const;

  const CurvatureModel& curvature() const { return curvature_; }

  // Flat-torus grid data.
  const std::vector<int>& resolution() const { return resolution_; }
  const std::vector<double>& side_lengths() const { return side_lengths_; }
  double spacing(int axis) const {
    return side_lengths_[axis] / resolution_[axis];
  }
  /// Periodic neighbor of `vertex` displaced by `step` cells along `axis`.
  int neighbor(int vertex, int axis, int step) const {
    const int res = resolution_[axis];
    const int stride = strides_[axis];
    const int coord = (vertex / stride) % res;
    int moved = (coord + step) % res;
    if (moved < 0) moved += res;
    return vertex + (moved - coord) * stride;
  }

  // Sphere data.
  const Eigen::MatrixXi& triangles() const { return triangles_; }
  double radius() const { return radius_; }

  double total_volume(Measure m) const;

  DiscreteManifold(const DiscreteManifold&) = delete;
  DiscreteManifold& operator=(const DiscreteManifold&) = delete;

 private:
  DiscreteManifold() = default;
  friend ManifoldPtr build_flat_torus(const std::vector<int>&,
                                      const std::vector<double>&);
  friend ManifoldPtr build_sphere(int, double);
  friend ManifoldPtr attach_weight(const ManifoldPtr&, const ScalarField&,
                                   double);

  int dimension_ = 0;
  Topology topology_ = Topology::flat_torus;
  Eigen::MatrixXd positions_;
  Eigen::VectorXd mu_;
  Eigen::VectorXd nu_;
  bool weighted_ = false;
  ScalarField weight_field_;
  double be_dimension_ = 0.0;
  CurvatureModel curvature_;
  std::vector<int> resolution_;
  std::vector<double> side_lengths_;
  std::vector<int> strides_;
  Eigen::MatrixXi triangles_;
  double radius_ = 0.0;
  std::uint64_t id_ = 0;
};

/// Uniform periodic grid on a rectangular torus.  `resolution` and
/// `side_lengths` must have equal length n in {1,2,3}; every resolution
/// must be >= 4 and every side length > 0.
ManifoldPtr build_flat_torus(const std::vector<int>& resolution,
                             const std::vector<double>& side_lengths);

/// Icosphere of the given radius: an icosahedron subdivided
/// `subdivision_level` times (1..8) with vertices projected to the sphere.
ManifoldPtr build_sphere(int subdivision_level, double radius);

/// Returns a copy of `base` carrying the weight potential h, the weighted
/// measure nu = e^{-h} mu, and the effective dimension `be_dimension` > n.
ManifoldPtr attach_weight(const ManifoldPtr& base, const ScalarField& h,
                          double be_dimension);

/// Lumped quadrature sum_i field_i * w_i against the chosen measure.
/// Summation order is ascending vertex index, so results are reproducible
/// bit for bit.
double integrate(const ScalarField& field, const DiscreteManifold& manifold,
                 Measure measure);

ScalarField constant_field(const DiscreteManifold& manifold, double value);

void require_same_manifold(const ScalarField& field,
                           const DiscreteManifold& manifold,
                           const char* what);

/// Debug dump: one CSV line per vertex with positions and both measures.
void dump_vertices_csv(const DiscreteManifold& manifold, std::ostream& out);

}  // namespace entroflow
