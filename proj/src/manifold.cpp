#include "entroflow/manifold.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <utility>

namespace entroflow {

namespace {

std::uint64_t next_manifold_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1);
}

void format_row(std::ostream& out, const double* values, int count) {
  char buf[64];
  for (int c = 0; c < count; ++c) {
    std::snprintf(buf, sizeof(buf), "%.17g", values[c]);
    if (c) out << ',';
    out << buf;
  }
  out << '\n';
}

}  // namespace

const char* topology_name(Topology t) {
  switch (t) {
    case Topology::flat_torus: return "flat_torus";
    case Topology::sphere: return "sphere";
  }
  return "unknown";
}

const char* measure_name(Measure m) {
  return m == Measure::mu ? "mu" : "nu";
}

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_discretization: return "invalid-discretization";
    case ErrorCode::invalid_dimension: return "invalid-dimension";
    case ErrorCode::assembly: return "assembly-error";
    case ErrorCode::spectral: return "spectral-error";
    case ErrorCode::flow: return "flow-error";
    case ErrorCode::kernel_truncation: return "kernel-truncation";
    case ErrorCode::degenerate_density: return "degenerate-density";
    case ErrorCode::nonpositive_omega: return "nonpositive-omega";
    case ErrorCode::normalization: return "normalization-error";
    case ErrorCode::unsupported_topology: return "unsupported-topology";
    case ErrorCode::config: return "config-error";
    case ErrorCode::io: return "io-error";
  }
  return "error";
}

const ScalarField& DiscreteManifold::weight_field() const {
  if (!weighted_)
    fail(ErrorCode::invalid_dimension, "manifold carries no weight field");
  return weight_field_;
}

double DiscreteManifold::be_dimension() const {
  if (!weighted_)
    fail(ErrorCode::invalid_dimension, "manifold carries no weight field");
  return be_dimension_;
}

double DiscreteManifold::total_volume(Measure m) const {
  const Eigen::VectorXd& w = measure_weights(m);
  double total = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) total += w[i];
  return total;
}

ManifoldPtr build_flat_torus(const std::vector<int>& resolution,
                             const std::vector<double>& side_lengths) {
  const int n = static_cast<int>(resolution.size());
  if (n < 1 || n > 3)
    fail(ErrorCode::invalid_discretization,
         "torus dimension must be 1, 2, or 3; got " + std::to_string(n));
  if (side_lengths.size() != resolution.size())
    fail(ErrorCode::invalid_discretization,
         "resolution and side_lengths must have equal length");
  long long count = 1;
  for (int a = 0; a < n; ++a) {
    if (resolution[a] < 4)
      fail(ErrorCode::invalid_discretization,
           "axis " + std::to_string(a) + " resolution must be >= 4; got " +
               std::to_string(resolution[a]));
    if (!(side_lengths[a] > 0.0))
      fail(ErrorCode::invalid_discretization,
           "axis " + std::to_string(a) + " side length must be positive");
    count *= resolution[a];
  }

  auto m = std::shared_ptr<DiscreteManifold>(new DiscreteManifold());
  m->dimension_ = n;
  m->topology_ = Topology::flat_torus;
  m->resolution_ = resolution;
  m->side_lengths_ = side_lengths;
  m->curvature_ = CurvatureModel{CurvatureModel::Kind::constant_sectional, 0.0};
  m->id_ = next_manifold_id();

  m->strides_.assign(n, 1);
  for (int a = 1; a < n; ++a)
    m->strides_[a] = m->strides_[a - 1] * resolution[a - 1];

  double cell = 1.0;
  for (int a = 0; a < n; ++a) cell *= side_lengths[a] / resolution[a];

  const int total = static_cast<int>(count);
  m->positions_.resize(total, n);
  for (int v = 0; v < total; ++v) {
    int rest = v;
    for (int a = 0; a < n; ++a) {
      const int idx = rest % resolution[a];
      rest /= resolution[a];
      m->positions_(v, a) = idx * (side_lengths[a] / resolution[a]);
    }
  }
  m->mu_ = Eigen::VectorXd::Constant(total, cell);
  m->nu_ = m->mu_;
  return m;
}

namespace {

struct IcoMesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> faces;
};

IcoMesh base_icosahedron() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  IcoMesh mesh;
  mesh.vertices = {
      {-1, phi, 0}, {1, phi, 0},  {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi},  {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1},
  };
  mesh.faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
  };
  return mesh;
}

void subdivide(IcoMesh& mesh) {
  std::map<std::pair<int, int>, int> midpoint;
  auto split = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const int idx = static_cast<int>(mesh.vertices.size());
    mesh.vertices.push_back((mesh.vertices[a] + mesh.vertices[b]) * 0.5);
    midpoint.emplace(key, idx);
    return idx;
  };
  std::vector<std::array<int, 3>> faces;
  faces.reserve(mesh.faces.size() * 4);
  for (const auto& f : mesh.faces) {
    const int ab = split(f[0], f[1]);
    const int bc = split(f[1], f[2]);
    const int ca = split(f[2], f[0]);
    faces.push_back({f[0], ab, ca});
    faces.push_back({f[1], bc, ab});
    faces.push_back({f[2], ca, bc});
    faces.push_back({ab, bc, ca});
  }
  mesh.faces = std::move(faces);
}

}  // namespace

ManifoldPtr build_sphere(int subdivision_level, double radius) {
  if (subdivision_level < 1 || subdivision_level > 8)
    fail(ErrorCode::invalid_discretization,
         "sphere subdivision level must be in [1, 8]; got " +
             std::to_string(subdivision_level));
  if (!(radius > 0.0))
    fail(ErrorCode::invalid_discretization, "sphere radius must be positive");

  IcoMesh mesh = base_icosahedron();
  for (int level = 0; level < subdivision_level; ++level) subdivide(mesh);

  auto m = std::shared_ptr<DiscreteManifold>(new DiscreteManifold());
  m->dimension_ = 2;
  m->topology_ = Topology::sphere;
  m->radius_ = radius;
  m->curvature_ = CurvatureModel{CurvatureModel::Kind::constant_sectional,
                                 1.0 / (radius * radius)};
  m->id_ = next_manifold_id();

  const int nv = static_cast<int>(mesh.vertices.size());
  m->positions_.resize(nv, 3);
  for (int v = 0; v < nv; ++v)
    m->positions_.row(v) = mesh.vertices[v].normalized() * radius;

  const int nf = static_cast<int>(mesh.faces.size());
  m->triangles_.resize(nf, 3);
  Eigen::VectorXd lumped = Eigen::VectorXd::Zero(nv);
  for (int f = 0; f < nf; ++f) {
    const auto& tri = mesh.faces[f];
    for (int c = 0; c < 3; ++c) m->triangles_(f, c) = tri[c];
    const Eigen::Vector3d p0 = m->positions_.row(tri[0]);
    const Eigen::Vector3d p1 = m->positions_.row(tri[1]);
    const Eigen::Vector3d p2 = m->positions_.row(tri[2]);
    const double area = 0.5 * (p1 - p0).cross(p2 - p0).norm();
    if (!(area > 1e-14 * radius * radius))
      fail(ErrorCode::invalid_discretization,
           "degenerate triangle " + std::to_string(f));
    for (int c = 0; c < 3; ++c) lumped[tri[c]] += area / 3.0;
  }
  m->mu_ = lumped;
  m->nu_ = lumped;
  return m;
}

ManifoldPtr attach_weight(const ManifoldPtr& base, const ScalarField& h,
                          double be_dimension) {
  if (!base) fail(ErrorCode::invalid_discretization, "null manifold");
  require_same_manifold(h, *base, "weight field");
  if (base->weighted())
    fail(ErrorCode::invalid_dimension, "manifold already carries a weight");
  if (!(be_dimension > base->dimension()))
    fail(ErrorCode::invalid_dimension,
         "effective dimension m must exceed the manifold dimension n = " +
             std::to_string(base->dimension()));

  auto m = std::shared_ptr<DiscreteManifold>(new DiscreteManifold());
  m->dimension_ = base->dimension();
  m->topology_ = base->topology();
  m->positions_ = base->positions();
  m->mu_ = base->mu();
  m->resolution_ = base->resolution_;
  m->side_lengths_ = base->side_lengths_;
  m->strides_ = base->strides_;
  m->triangles_ = base->triangles_;
  m->radius_ = base->radius_;
  m->id_ = next_manifold_id();
  m->weighted_ = true;
  m->be_dimension_ = be_dimension;
  m->curvature_ = CurvatureModel{CurvatureModel::Kind::weighted_derived,
                                 base->curvature().sectional};

  const int nv = base->vertex_count();
  m->nu_.resize(nv);
  for (int v = 0; v < nv; ++v)
    m->nu_[v] = std::exp(-h.values[v]) * base->mu()[v];
  m->weight_field_.values = h.values;
  m->weight_field_.manifold_id = m->id_;
  return m;
}

double integrate(const ScalarField& field, const DiscreteManifold& manifold,
                 Measure measure) {
  require_same_manifold(field, manifold, "integrand");
  const Eigen::VectorXd& w = manifold.measure_weights(measure);
  double total = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) total += field.values[i] * w[i];
  return total;
}

ScalarField constant_field(const DiscreteManifold& manifold, double value) {
  return ScalarField{Eigen::VectorXd::Constant(manifold.vertex_count(), value),
                     manifold.id()};
}

void require_same_manifold(const ScalarField& field,
                           const DiscreteManifold& manifold,
                           const char* what) {
  if (field.manifold_id != manifold.id())
    fail(ErrorCode::invalid_discretization,
         std::string(what) + " does not belong to this manifold");
  if (field.values.size() != manifold.vertex_count())
    fail(ErrorCode::invalid_discretization,
         std::string(what) + " has wrong vertex count");
}

void dump_vertices_csv(const DiscreteManifold& manifold, std::ostream& out) {
  const int dim = static_cast<int>(manifold.positions().cols());
  out << "index";
  for (int a = 0; a < dim; ++a) out << ",x" << a;
  out << ",mu,nu\n";
  double row[8];
  for (int v = 0; v < manifold.vertex_count(); ++v) {
    out << v << ',';
    for (int a = 0; a < dim; ++a) row[a] = manifold.positions()(v, a);
    row[dim] = manifold.mu()[v];
    row[dim + 1] = manifold.nu()[v];
    format_row(out, row, dim + 2);
  }
}

}  // namespace entroflow
