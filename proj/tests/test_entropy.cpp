#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "entroflow/entropy.hpp"
#include "entroflow/errors.hpp"
#include "entroflow/euclidean.hpp"
#include "entroflow/flow.hpp"
#include "entroflow/manifold.hpp"
#include "entroflow/operators.hpp"

using namespace entroflow;

namespace {

// Golden-section argmin, independent of the closed-form minimizer.
double golden_argmin(const std::function<double(double)>& f, double lo,
                     double hi) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < 400 && (b - a) > 1e-14 * (std::abs(a) + 1.0); ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

struct KernelSetup {
  ManifoldPtr manifold;
  LaplacianOperator op;
  ScalarField u_tilde;
  ScalarField u;
};

KernelSetup torus_kernel_setup(int res, double t, int source) {
  auto torus =
      build_flat_torus({res, res}, {2.0 * M_PI, 2.0 * M_PI});
  auto op = assemble_laplacian(torus, Measure::mu);
  const auto sd = low_spectrum(op, res * res);
  ScalarField u_tilde = heat_kernel(sd, *torus, KernelSpec{source, t, 1e-8});
  ScalarField u = sqrt_state(u_tilde);
  return KernelSetup{torus, std::move(op), std::move(u_tilde), std::move(u)};
}

double f_integral(const ScalarField& f, const ScalarField& u_tilde,
                  const Eigen::VectorXd& weights) {
  double acc = 0.0;
  for (Eigen::Index v = 0; v < weights.size(); ++v) {
    acc += weights[v] * f.values[v] * u_tilde.values[v];
  }
  return acc;
}

}  // namespace

TEST_CASE("scale trade-off minimum matches a golden-section search") {
  for (double omega : {0.3, 1.0, 17.0}) {
    for (double d : {1.0, 2.0, 3.0, 4.5}) {
      auto h = [&](double s) { return omega * s - 0.5 * d * std::log(s); };
      const ScaleMinimum min = scale_tradeoff_min(omega, d);
      const double s_hat = golden_argmin(h, 1e-8, 1e8);
      CHECK(min.s_star == doctest::Approx(s_hat).epsilon(1e-6));
      CHECK(min.value == doctest::Approx(h(s_hat)).epsilon(1e-12));
      CHECK(min.value == doctest::Approx(h(min.s_star)).epsilon(1e-13));
    }
  }
}

TEST_CASE("euclidean closed forms match adaptive quadrature") {
  for (int d : {1, 2, 3}) {
    for (double t : {0.05, 0.7, 3.0}) {
      const EuclideanEntropy closed = euclidean_closed(d, t);
      const EuclideanEntropy quad = euclidean_quadrature(d, t, 1e-13);
      CHECK(closed.entropy ==
            doctest::Approx(quad.entropy).epsilon(1e-10));
      CHECK(closed.dirichlet ==
            doctest::Approx(quad.dirichlet).epsilon(1e-10));
      CHECK(closed.w == 0.0);
      CHECK(std::abs(quad.w) < 1e-10);
      CHECK(closed.y0 == doctest::Approx(quad.y0).epsilon(1e-10));
    }
    // The logarithmic entropy of the flat-space family does not move in t.
    CHECK(euclidean_closed(d, 0.2).y0 ==
          doctest::Approx(euclidean_closed(d, 5.0).y0).epsilon(1e-14));
    // Its value is the negated sharp-bound offset.
    CHECK(euclidean_closed(d, 1.0).y0 ==
          doctest::Approx(-lower_bound_offset(d)).epsilon(1e-14));
  }
  CHECK(unit_sphere_area(1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(unit_sphere_area(2) == doctest::Approx(2.0 * M_PI).epsilon(1e-14));
  CHECK(unit_sphere_area(3) == doctest::Approx(4.0 * M_PI).epsilon(1e-14));
  CHECK_THROWS_AS(unit_sphere_area(4), Error);
}

TEST_CASE("euclidean adjusted-entropy rate matches a finite difference") {
  auto adjusted = [](int d, double a, double t) {
    const EuclideanEntropy e = euclidean_closed(d, t);
    return e.entropy + 0.5 * d * std::log(e.dirichlet + a) - 4.0 * a * t;
  };
  for (int d : {2, 3}) {
    for (double a : {0.5, -0.5}) {
      const double t = a < 0.0 ? 0.3 : 1.0;
      const double h = 1e-5;
      const double slope =
          (adjusted(d, a, t + h) - adjusted(d, a, t - h)) / (2.0 * h);
      CHECK(-slope == doctest::Approx(euclidean_ya_rate(d, t, a)).epsilon(1e-6));
    }
  }
  CHECK(euclidean_ya_rate(2, 1.0, 0.5) == doctest::Approx(8.0 / 6.0));
  CHECK(euclidean_ya_rate(3, 0.7, 0.0) == 0.0);
}

TEST_CASE("scale-dependent entropy agrees with its logarithmic-coordinate form") {
  const KernelSetup ks = torus_kernel_setup(32, 0.5, 37);
  const EntropyTerms terms = entropy_terms(ks.u, ks.op);
  const double d = effective_dim(ks.op);
  for (double tau : {0.2, 0.5, 1.3}) {
    const LogDensity ld = log_density(ks.u_tilde, *ks.manifold, Measure::mu, tau);
    REQUIRE(ld.masked_count == 0);
    const double w_def = 4.0 * tau * terms.dirichlet +
                         f_integral(ld.f, ks.u_tilde, ks.op.mass()) - d;
    CHECK(w_entropy(terms, d, tau) ==
          doctest::Approx(w_def).epsilon(1e-10));
  }
}

TEST_CASE("sharp lower bound is attained exactly at the matched scale") {
  const KernelSetup ks = torus_kernel_setup(32, 0.5, 37);
  const EntropyTerms terms = entropy_terms(ks.u, ks.op);
  const double d = effective_dim(ks.op);
  for (double a : {0.0, 0.4, -0.3}) {
    const double omega = terms.dirichlet + a;
    REQUIRE(omega > 0.0);
    const double bound = entropy_lower_bound(terms, d, a);
    const double tau_star = 0.125 * d / omega;
    CHECK(w_entropy(terms, d, tau_star) ==
          doctest::Approx(bound).epsilon(1e-12));
  }
  // Only the unshifted bound dominates the whole scale sweep; the shifted
  // ones pick up a linear term that tilts the trade-off away from tau*.
  const double floor0 = entropy_lower_bound(terms, d, 0.0);
  for (double tau = 0.01; tau < 10.0; tau *= 1.6) {
    CHECK(w_entropy(terms, d, tau) >= floor0 - 1e-12);
  }
}

TEST_CASE("constant state reproduces the closed-form entropy value") {
  auto torus = build_flat_torus({16, 16}, {2.0 * M_PI, 2.0 * M_PI});
  auto op = assemble_laplacian(torus, Measure::mu);
  ScalarField u = constant_field(*torus, 1.0 / std::sqrt(4.0 * M_PI * M_PI));
  CHECK(w_entropy(u, op, 1.0) ==
        doctest::Approx(std::log(M_PI) - 2.0).epsilon(1e-12));
  CHECK_THROWS_AS(log_entropy_y0(u, op), Error);
}

TEST_CASE("shifted-entropy dissipation equals the scale-matched dissipation") {
  const KernelSetup ks = torus_kernel_setup(32, 0.5, 37);
  const EntropyTerms terms = entropy_terms(ks.u, ks.op);
  const double d = effective_dim(ks.op);
  for (double a : {0.4, -0.3}) {
    const YaDissipation ya = ya_dissipation(ks.u, ks.op, a);
    CHECK(ya.omega == doctest::Approx(terms.dirichlet + a).epsilon(1e-14));
    CHECK(ya.form_gap <= 1e-9);

    const double tau_star = 0.125 * d / ya.omega;
    const LogDensity ld =
        log_density(ks.u_tilde, *ks.manifold, Measure::mu, tau_star);
    const double w_rate = w_dissipation(ks.u_tilde, ld, ks.op);
    CHECK(ya.rate == doctest::Approx(w_rate).epsilon(1e-10));
  }
}

TEST_CASE("weighted entropies reduce to the plain ones at zero weight") {
  auto base = build_flat_torus({24, 24}, {2.0 * M_PI, 2.0 * M_PI});
  auto weighted = attach_weight(base, constant_field(*base, 0.0), 3.7);
  auto op = assemble_laplacian(weighted, Measure::nu);
  const ScalarField u_tilde = torus_heat_state_images(*weighted, 51, 0.4);
  const ScalarField u = sqrt_state(u_tilde);

  const EntropyTerms terms = entropy_terms(u, op);
  const double a = 0.2;
  const double t = 0.4;
  CHECK(weighted_ha(u, op, a, t) ==
        doctest::Approx(adjusted_ya(terms, 3.7, a, t)).epsilon(1e-13));
  CHECK(effective_dim(op) == 3.7);

  auto plain_op = assemble_laplacian(base, Measure::mu);
  const ScalarField u_base =
      sqrt_state(torus_heat_state_images(*base, 51, 0.4));
  const EntropyTerms plain = entropy_terms(u_base, plain_op);
  CHECK(terms.entropy == doctest::Approx(plain.entropy).epsilon(1e-13));
  CHECK(terms.dirichlet == doctest::Approx(plain.dirichlet).epsilon(1e-13));
}

TEST_CASE("weighted sharp bound is attained at the matched scale") {
  auto base = build_flat_torus({24, 24}, {2.0 * M_PI, 2.0 * M_PI});
  ScalarField h;
  h.manifold_id = base->id();
  h.values.resize(base->vertex_count());
  for (int v = 0; v < base->vertex_count(); ++v) {
    h.values[v] = 0.3 * std::cos(base->positions()(v, 0));
  }
  auto weighted = attach_weight(base, h, 4.0);
  auto op = assemble_laplacian(weighted, Measure::nu);

  ScalarField u_tilde = torus_heat_state_images(*weighted, 51, 0.4);
  const double mass = integrate(u_tilde, *weighted, Measure::nu);
  u_tilde.values /= mass;
  const ScalarField u = sqrt_state(u_tilde);

  const EntropyTerms terms = entropy_terms(u, op);
  const double m = effective_dim(op);
  CHECK(m == 4.0);
  const double a = 0.1;
  const double omega = terms.dirichlet + a;
  const double tau_star = 0.125 * m / omega;
  CHECK(w_entropy(terms, m, tau_star) ==
        doctest::Approx(entropy_lower_bound(terms, m, a)).epsilon(1e-12));
}

TEST_CASE("weighted dissipation splits into bracket and drift") {
  auto base = build_flat_torus({24, 24}, {2.0 * M_PI, 2.0 * M_PI});
  ScalarField h;
  h.manifold_id = base->id();
  h.values.resize(base->vertex_count());
  for (int v = 0; v < base->vertex_count(); ++v) {
    h.values[v] = 0.3 * std::cos(base->positions()(v, 0));
  }
  auto weighted = attach_weight(base, h, 4.0);
  auto op = assemble_laplacian(weighted, Measure::nu);

  ScalarField u_tilde = torus_heat_state_images(*weighted, 51, 0.4);
  const double mass = integrate(u_tilde, *weighted, Measure::nu);
  u_tilde.values /= mass;
  const ScalarField u = sqrt_state(u_tilde);

  const WeightedDissipation wd = weighted_dissipation_omega(u, op, 0.1);
  CHECK(wd.rate == doctest::Approx(wd.bracket + wd.drift).epsilon(1e-14));
  CHECK(wd.drift >= 0.0);
  const EntropyTerms terms = entropy_terms(u, op);
  CHECK(wd.tau ==
        doctest::Approx(0.125 * 4.0 / (terms.dirichlet + 0.1)).epsilon(1e-14));
}

TEST_CASE("rigidity gap separates self-similar states from mixtures") {
  auto torus = build_flat_torus({64, 64}, {2.0 * M_PI, 2.0 * M_PI});
  auto op = assemble_laplacian(torus, Measure::mu);
  const double t = 0.1;

  const ScalarField matched = torus_heat_state_images(*torus, 130, t);
  const LogDensity ld_m = log_density(matched, *torus, Measure::mu, t);
  const double gap_matched = rigidity_gap(matched, ld_m, op);
  CHECK(gap_matched >= 0.0);
  CHECK(gap_matched < 1e-4);

  ScalarField mixture;
  mixture.manifold_id = torus->id();
  const ScalarField other = torus_heat_state_images(*torus, 2080, t);
  mixture.values = 0.5 * matched.values + 0.5 * other.values;
  const LogDensity ld_x = log_density(mixture, *torus, Measure::mu, t);
  const double gap_mixture = rigidity_gap(mixture, ld_x, op);
  CHECK(gap_mixture > 100.0 * std::max(gap_matched, 1e-8));
}

TEST_CASE("kernel entropies approach the euclidean values on fine grids") {
  auto torus = build_flat_torus({128, 128}, {2.0 * M_PI, 2.0 * M_PI});
  auto op = assemble_laplacian(torus, Measure::mu);
  const double t = 0.1;
  const ScalarField u_tilde = torus_heat_state_images(*torus, 200, t);
  const ScalarField u = sqrt_state(u_tilde);
  const EntropyTerms terms = entropy_terms(u, op);
  const EuclideanEntropy eu = euclidean_closed(2, t);

  CHECK(terms.entropy == doctest::Approx(eu.entropy).epsilon(1e-9));
  CHECK(terms.dirichlet == doctest::Approx(eu.dirichlet).epsilon(2e-2));
  CHECK(std::abs(log_entropy_y0(terms, 2.0) - eu.y0) < 2e-2);
}

TEST_CASE("entropy functionals reject bad inputs") {
  auto torus = build_flat_torus({12, 12}, {2.0 * M_PI, 2.0 * M_PI});
  auto op = assemble_laplacian(torus, Measure::mu);

  ScalarField bad = constant_field(*torus, 1.0);
  CHECK_THROWS_AS(entropy_terms(bad, op), Error);

  const ScalarField u_tilde = torus_heat_state_images(*torus, 0, 0.5);
  const ScalarField u = sqrt_state(u_tilde);
  const EntropyTerms terms = entropy_terms(u, op);
  CHECK_THROWS_AS(log_entropy_ya(terms, 2.0, -terms.dirichlet - 1.0), Error);
  CHECK_THROWS_AS(w_entropy(terms, 2.0, 0.0), Error);
  CHECK_THROWS_AS(w_entropy(terms, 2.0, -1.0), Error);
  CHECK_THROWS_AS(weighted_ha(u, op, 0.0, 1.0), Error);
  CHECK_THROWS_AS(scale_tradeoff_min(0.0, 2.0), Error);
  CHECK_THROWS_AS(scale_tradeoff_min(1.0, 0.0), Error);
  CHECK_THROWS_AS(lower_bound_offset(0.0), Error);
  CHECK_THROWS_AS(ya_dissipation(u, op, -terms.dirichlet - 0.5), Error);
}
