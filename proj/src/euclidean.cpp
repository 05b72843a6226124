#include "entroflow/euclidean.hpp"

#include <cmath>
#include <functional>

#include "entroflow/errors.hpp"

namespace entroflow {

namespace {

void check_dim(int dim) {
  if (dim < 1 || dim > 3) {
    fail(ErrorCode::invalid_dimension,
         "flat-space reference supports dimensions 1..3");
  }
}

// Gauss-Kronrod 7-15 pair on [-1, 1].
constexpr double kKronrodNodes[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,                0.207784955007898,
    0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};
constexpr double kKronrodWeights[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
// Gauss weights sit on every second Kronrod node.
constexpr double kGaussWeights[7] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870};

struct PanelResult {
  double kronrod = 0.0;
  double error = 0.0;
};

PanelResult panel(const std::function<double(double)>& f, double lo,
                  double hi) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double k15 = 0.0;
  double g7 = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double value = f(mid + half * kKronrodNodes[i]);
    k15 += kKronrodWeights[i] * value;
    if (i % 2 == 1) g7 += kGaussWeights[i / 2] * value;
  }
  PanelResult out;
  out.kronrod = half * k15;
  out.error = std::abs(half * (k15 - g7));
  return out;
}

double adaptive(const std::function<double(double)>& f, double lo, double hi,
                double tol) {
  struct Segment {
    double lo, hi;
    PanelResult res;
  };
  std::vector<Segment> stack{{lo, hi, panel(f, lo, hi)}};
  double total = 0.0;
  int budget = 4000;
  while (!stack.empty()) {
    Segment seg = stack.back();
    stack.pop_back();
    const double span_tol = tol * (seg.hi - seg.lo) / (hi - lo);
    if (seg.res.error <= span_tol || --budget <= 0) {
      total += seg.res.kronrod;
      continue;
    }
    const double mid = 0.5 * (seg.lo + seg.hi);
    stack.push_back({seg.lo, mid, panel(f, seg.lo, mid)});
    stack.push_back({mid, seg.hi, panel(f, mid, seg.hi)});
  }
  return total;
}

}  // namespace

double unit_sphere_area(int dim) {
  check_dim(dim);
  return 2.0 * std::pow(M_PI, 0.5 * dim) / std::tgamma(0.5 * dim);
}

EuclideanEntropy euclidean_closed(int dim, double t) {
  check_dim(dim);
  if (!(t > 0.0)) fail(ErrorCode::invalid_dimension, "t must be positive");
  EuclideanEntropy out;
  const double d = dim;
  out.entropy = 0.5 * d * std::log(4.0 * M_PI * t) + 0.5 * d;
  out.dirichlet = d / (8.0 * t);
  out.w = 0.0;
  out.y0 = 0.5 * d * std::log(M_PI * d / 2.0) + 0.5 * d;
  return out;
}

EuclideanEntropy euclidean_quadrature(int dim, double t, double rel_tol) {
  check_dim(dim);
  if (!(t > 0.0)) fail(ErrorCode::invalid_dimension, "t must be positive");
  const double d = dim;
  const double area = unit_sphere_area(dim);
  const double r_max = std::sqrt(4.0 * t * 95.0);
  const double norm = std::pow(4.0 * M_PI * t, -0.5 * d);

  // -u~ log u~ = u~ (r^2/(4t) + (d/2) log(4 pi t))
  auto entropy_radial = [&](double r) {
    const double density = norm * std::exp(-r * r / (4.0 * t));
    const double neg_log = r * r / (4.0 * t) + 0.5 * d * std::log(4.0 * M_PI * t);
    return area * std::pow(r, d - 1.0) * density * neg_log;
  };
  // |grad u|^2 with u = density^(1/2): (r/(4t))^2 u^2
  auto dirichlet_radial = [&](double r) {
    const double density = norm * std::exp(-r * r / (4.0 * t));
    const double slope = r / (4.0 * t);
    return area * std::pow(r, d - 1.0) * density * slope * slope;
  };

  EuclideanEntropy out;
  out.entropy = adaptive(entropy_radial, 0.0, r_max, rel_tol);
  out.dirichlet = adaptive(dirichlet_radial, 0.0, r_max, rel_tol);
  out.w = out.entropy + 4.0 * t * out.dirichlet -
          0.5 * d * std::log(4.0 * M_PI * t) - d;
  out.y0 = out.entropy + 0.5 * d * std::log(out.dirichlet);
  return out;
}

double euclidean_ya_rate(int dim, double t, double a) {
  check_dim(dim);
  const double d = dim;
  const double denom = d + 8.0 * a * t;
  if (!(denom > 0.0)) {
    fail(ErrorCode::nonpositive_omega,
         "shifted energy of the flat-space family is not positive");
  }
  return 32.0 * a * a * t / denom;
}

ScalarField torus_heat_state_images(const DiscreteManifold& manifold,
                                    int source_vertex, double t) {
  if (manifold.topology() != Topology::flat_torus) {
    fail(ErrorCode::unsupported_topology,
         "image sums require a flat torus");
  }
  if (!(t > 0.0)) fail(ErrorCode::invalid_dimension, "t must be positive");
  if (source_vertex < 0 || source_vertex >= manifold.vertex_count()) {
    fail(ErrorCode::invalid_dimension, "source vertex out of range");
  }
  const int n = manifold.vertex_count();
  const int dim = manifold.dimension();
  const double reach = std::sqrt(4.0 * t * 93.0);

  // Per-axis periodized 1D factors; the kernel on a product of circles is
  // the product of circle kernels.
  ScalarField out;
  out.manifold_id = manifold.id();
  out.values = Eigen::VectorXd::Ones(n);
  const double norm1 = 1.0 / std::sqrt(4.0 * M_PI * t);
  for (int a = 0; a < dim; ++a) {
    const double len = manifold.side_lengths()[a];
    const double dx = manifold.spacing(a);
    const int res = manifold.resolution()[a];
    const int source_idx =
        static_cast<int>(std::llround(manifold.positions()(source_vertex, a) / dx));
    const int images = static_cast<int>(std::ceil((reach + len) / len)) + 1;
    std::vector<double> factor(res);
    for (int i = 0; i < res; ++i) {
      const double base = (i - source_idx) * dx;
      double s = 0.0;
      for (int m = -images; m <= images; ++m) {
        const double shift = base + m * len;
        s += norm1 * std::exp(-shift * shift / (4.0 * t));
      }
      factor[i] = s;
    }
    for (int v = 0; v < n; ++v) {
      int rem = v;
      for (int ax = 0; ax < a; ++ax) rem /= manifold.resolution()[ax];
      out.values[v] *= factor[rem % res];
    }
  }
  double mass = 0.0;
  const Eigen::VectorXd& mu = manifold.mu();
  for (int v = 0; v < n; ++v) mass += mu[v] * out.values[v];
  out.values /= mass;
  return out;
}

}  // namespace entroflow
