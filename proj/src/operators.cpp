#include "entroflow/operators.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <utility>

#include "entroflow/errors.hpp"

namespace entroflow {

namespace {

double edge_measure_factor(const DiscreteManifold& m, Measure measure, int i,
                           int j) {
  if (measure == Measure::mu) return 1.0;
  const Eigen::VectorXd& h = m.weight_field().values;
  return std::exp(-0.5 * (h[i] + h[j]));
}

std::vector<StiffnessEdge> torus_edges(const DiscreteManifold& m,
                                       Measure measure) {
  const int n = m.vertex_count();
  const int dim = m.dimension();
  const double cell = m.mu()[0];
  std::vector<StiffnessEdge> edges;
  edges.reserve(static_cast<std::size_t>(n) * dim);
  for (int v = 0; v < n; ++v) {
    for (int a = 0; a < dim; ++a) {
      const int u = m.neighbor(v, a, +1);
      const double dx = m.spacing(a);
      const double w =
          cell / (dx * dx) * edge_measure_factor(m, measure, v, u);
      edges.push_back({v, u, w});
    }
  }
  return edges;
}

std::vector<StiffnessEdge> sphere_edges(const DiscreteManifold& m,
                                        Measure measure) {
  const auto& tris = m.triangles();
  const auto& pos = m.positions();
  std::map<std::pair<int, int>, double> cot;
  for (int t = 0; t < tris.rows(); ++t) {
    for (int corner = 0; corner < 3; ++corner) {
      const int k = tris(t, corner);
      const int i = tris(t, (corner + 1) % 3);
      const int j = tris(t, (corner + 2) % 3);
      const Eigen::Vector3d e1 = pos.row(i).transpose() - pos.row(k).transpose();
      const Eigen::Vector3d e2 = pos.row(j).transpose() - pos.row(k).transpose();
      const double cross = e1.cross(e2).norm();
      if (cross <= 1e-14 * e1.norm() * e2.norm()) {
        fail(ErrorCode::assembly,
             "degenerate corner in triangle " + std::to_string(t));
      }
      const double w = 0.5 * e1.dot(e2) / cross;
      const auto key = std::minmax(i, j);
      cot[{key.first, key.second}] += w;
    }
  }
  std::vector<StiffnessEdge> edges;
  edges.reserve(cot.size());
  for (const auto& [key, w] : cot) {
    edges.push_back({key.first, key.second,
                     w * edge_measure_factor(m, measure, key.first, key.second)});
  }
  return edges;
}

}  // namespace

LaplacianOperator::LaplacianOperator(ManifoldPtr manifold, Measure measure,
                                     std::vector<StiffnessEdge> edges)
    : manifold_(std::move(manifold)),
      measure_(measure),
      edges_(std::move(edges)) {
  const int n = manifold_->vertex_count();
  mass_ = manifold_->measure_weights(measure_);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(edges_.size() * 4);
  for (const auto& e : edges_) {
    trips.emplace_back(e.i, e.i, e.weight);
    trips.emplace_back(e.j, e.j, e.weight);
    trips.emplace_back(e.i, e.j, -e.weight);
    trips.emplace_back(e.j, e.i, -e.weight);
  }
  stiffness_.resize(n, n);
  stiffness_.setFromTriplets(trips.begin(), trips.end());
  stiffness_.makeCompressed();
}

double LaplacianOperator::quadratic_form(const Eigen::VectorXd& u,
                                         const Eigen::VectorXd& v) const {
  if (u.size() != mass_.size() || v.size() != mass_.size()) {
    fail(ErrorCode::assembly, "quadratic_form: field size mismatch");
  }
  double acc = 0.0;
  for (const auto& e : edges_) {
    acc += e.weight * (u[e.i] - u[e.j]) * (v[e.i] - v[e.j]);
  }
  return acc;
}

LaplacianOperator assemble_laplacian(const ManifoldPtr& manifold,
                                     Measure measure) {
  if (!manifold) fail(ErrorCode::assembly, "null manifold");
  if (measure == Measure::nu && !manifold->weighted()) {
    fail(ErrorCode::assembly,
         "weighted measure requested on an unweighted manifold");
  }
  std::vector<StiffnessEdge> edges;
  switch (manifold->topology()) {
    case Topology::flat_torus:
      edges = torus_edges(*manifold, measure);
      break;
    case Topology::sphere:
      edges = sphere_edges(*manifold, measure);
      break;
  }
  return LaplacianOperator(manifold, measure, std::move(edges));
}

Eigen::MatrixXd gradient(const ScalarField& field,
                         const DiscreteManifold& manifold) {
  require_same_manifold(field, manifold, "gradient");
  const int n = manifold.vertex_count();
  if (manifold.topology() == Topology::flat_torus) {
    const int dim = manifold.dimension();
    Eigen::MatrixXd g(n, dim);
    for (int v = 0; v < n; ++v) {
      for (int a = 0; a < dim; ++a) {
        const double up = field.values[manifold.neighbor(v, a, +1)];
        const double dn = field.values[manifold.neighbor(v, a, -1)];
        g(v, a) = (up - dn) / (2.0 * manifold.spacing(a));
      }
    }
    return g;
  }
  const auto& tris = manifold.triangles();
  const auto& pos = manifold.positions();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, 3);
  Eigen::VectorXd area_sum = Eigen::VectorXd::Zero(n);
  for (int t = 0; t < tris.rows(); ++t) {
    const Eigen::Vector3d p0 = pos.row(tris(t, 0));
    const Eigen::Vector3d p1 = pos.row(tris(t, 1));
    const Eigen::Vector3d p2 = pos.row(tris(t, 2));
    const Eigen::Vector3d cr = (p1 - p0).cross(p2 - p0);
    const double two_area = cr.norm();
    const Eigen::Vector3d nh = cr / two_area;
    // grad of the barycentric hat of corner c, in the triangle plane
    Eigen::Vector3d gt = Eigen::Vector3d::Zero();
    const Eigen::Vector3d opp[3] = {p2 - p1, p0 - p2, p1 - p0};
    for (int c = 0; c < 3; ++c) {
      gt += field.values[tris(t, c)] * nh.cross(opp[c]) / two_area;
    }
    const double area = 0.5 * two_area;
    for (int c = 0; c < 3; ++c) {
      g.row(tris(t, c)) += area * gt.transpose();
      area_sum[tris(t, c)] += area;
    }
  }
  for (int v = 0; v < n; ++v) g.row(v) /= area_sum[v];
  return g;
}

ScalarField gradient_sq(const ScalarField& field,
                        const LaplacianOperator& op) {
  const DiscreteManifold& m = op.manifold();
  require_same_manifold(field, m, "gradient_sq");
  const int n = m.vertex_count();
  ScalarField out;
  out.manifold_id = m.id();
  out.values.resize(n);
  if (m.topology() == Topology::flat_torus) {
    const int dim = m.dimension();
    for (int v = 0; v < n; ++v) {
      double s = 0.0;
      for (int a = 0; a < dim; ++a) {
        const double up = field.values[m.neighbor(v, a, +1)];
        const double dn = field.values[m.neighbor(v, a, -1)];
        const double d = (up - dn) / (2.0 * m.spacing(a));
        s += d * d;
      }
      out.values[v] = s;
    }
    return out;
  }
  // Triangle-averaged squared gradients.  The lumped split A_T/3 makes
  // integrate(gradient_sq(u), mu) reproduce the stiffness energy u.S.u.
  const auto& tris = m.triangles();
  const auto& pos = m.positions();
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
  for (int t = 0; t < tris.rows(); ++t) {
    const Eigen::Vector3d p0 = pos.row(tris(t, 0));
    const Eigen::Vector3d p1 = pos.row(tris(t, 1));
    const Eigen::Vector3d p2 = pos.row(tris(t, 2));
    const Eigen::Vector3d cr = (p1 - p0).cross(p2 - p0);
    const double two_area = cr.norm();
    const Eigen::Vector3d nh = cr / two_area;
    Eigen::Vector3d gt = Eigen::Vector3d::Zero();
    const Eigen::Vector3d opp[3] = {p2 - p1, p0 - p2, p1 - p0};
    for (int c = 0; c < 3; ++c) {
      gt += field.values[tris(t, c)] * nh.cross(opp[c]) / two_area;
    }
    const double gsq = gt.squaredNorm();
    const double third = 0.5 * two_area / 3.0;
    for (int c = 0; c < 3; ++c) acc[tris(t, c)] += third * gsq;
  }
  const Eigen::VectorXd& mu = m.mu();
  for (int v = 0; v < n; ++v) out.values[v] = acc[v] / mu[v];
  return out;
}

HessianData hessian(const ScalarField& field, const LaplacianOperator& op) {
  const DiscreteManifold& m = op.manifold();
  require_same_manifold(field, m, "hessian");
  if (m.topology() != Topology::flat_torus) {
    fail(ErrorCode::unsupported_topology,
         "hessian stencils require a grid topology");
  }
  const int n = m.vertex_count();
  const int dim = m.dimension();
  HessianData h;
  h.dim = dim;
  h.packed.resize(n, dim * dim);
  const Eigen::VectorXd& u = field.values;
  for (int v = 0; v < n; ++v) {
    for (int a = 0; a < dim; ++a) {
      const double dxa = m.spacing(a);
      const int ap = m.neighbor(v, a, +1);
      const int am = m.neighbor(v, a, -1);
      h.packed(v, a * dim + a) = (u[ap] - 2.0 * u[v] + u[am]) / (dxa * dxa);
      for (int b = a + 1; b < dim; ++b) {
        const double dxb = m.spacing(b);
        const double upp = u[m.neighbor(ap, b, +1)];
        const double upm = u[m.neighbor(ap, b, -1)];
        const double ump = u[m.neighbor(am, b, +1)];
        const double umm = u[m.neighbor(am, b, -1)];
        const double mixed = (upp - upm - ump + umm) / (4.0 * dxa * dxb);
        h.packed(v, a * dim + b) = mixed;
        h.packed(v, b * dim + a) = mixed;
      }
    }
  }
  return h;
}

ScalarField ricci_form(const DiscreteManifold& manifold,
                       const ScalarField& v_sq) {
  require_same_manifold(v_sq, manifold, "ricci_form");
  if (manifold.curvature().kind != CurvatureModel::Kind::constant_sectional) {
    fail(ErrorCode::invalid_dimension,
         "ricci_form needs a constant-curvature model; weighted manifolds "
         "use bakry_emery_form");
  }
  ScalarField out;
  out.manifold_id = manifold.id();
  const double factor =
      (manifold.dimension() - 1) * manifold.curvature().sectional;
  out.values = factor * v_sq.values;
  return out;
}

ScalarField bakry_emery_form(const DiscreteManifold& manifold,
                             const Eigen::MatrixXd& grad_f,
                             const Eigen::MatrixXd& grad_h,
                             const HessianData& hess_h) {
  if (!manifold.weighted()) {
    fail(ErrorCode::invalid_dimension,
         "bakry_emery_form requires a weighted manifold");
  }
  const int n = manifold.vertex_count();
  const int dim = manifold.dimension();
  if (grad_f.rows() != n || grad_h.rows() != n || hess_h.dim != dim) {
    fail(ErrorCode::invalid_dimension, "bakry_emery_form: shape mismatch");
  }
  const double excess = manifold.be_dimension() - manifold.dimension();
  const double base_factor =
      (manifold.dimension() - 1) * manifold.curvature().sectional;
  ScalarField out;
  out.manifold_id = manifold.id();
  out.values.resize(n);
  for (int v = 0; v < n; ++v) {
    double quad = 0.0;
    for (int a = 0; a < dim; ++a) {
      for (int b = 0; b < dim; ++b) {
        quad += grad_f(v, a) * hess_h.entry(v, a, b) * grad_f(v, b);
      }
    }
    const double drift = grad_h.row(v).dot(grad_f.row(v));
    out.values[v] = base_factor * grad_f.row(v).squaredNorm() + quad -
                    drift * drift / excess;
  }
  return out;
}

void dump_operator_csv(const LaplacianOperator& op, std::ostream& out) {
  out << "row,col,value\n";
  char buf[96];
  const auto& s = op.stiffness();
  for (int c = 0; c < s.outerSize(); ++c) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(s, c); it; ++it) {
      std::snprintf(buf, sizeof(buf), "%d,%d,%.17g\n",
                    static_cast<int>(it.row()), static_cast<int>(it.col()),
                    it.value());
      out << buf;
    }
  }
}

}  // namespace entroflow
