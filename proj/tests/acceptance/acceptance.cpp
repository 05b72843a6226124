// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria.  Tolerances are pinned here; nothing is tuned at runtime.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "entroflow/config.hpp"
#include "entroflow/diagnostics.hpp"
#include "entroflow/entropy.hpp"
#include "entroflow/errors.hpp"
#include "entroflow/euclidean.hpp"
#include "entroflow/flow.hpp"
#include "entroflow/manifold.hpp"
#include "entroflow/operators.hpp"
#include "entroflow/registry.hpp"
#include "entroflow/runner.hpp"

using namespace entroflow;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof(buf), pattern, args);
  va_end(args);
  return buf;
}

std::vector<double> uniform_times(double t0, double t1, int count) {
  std::vector<double> times;
  const double gap = (t1 - t0) / (count - 1);
  for (int i = 0; i < count; ++i) times.push_back(t0 + gap * i);
  times.back() = t1;
  return times;
}

/// Smallest mode count (kept above the closed-form threshold n/4) whose
/// spectral tail bound (n-k) exp(-lambda_k t) clears the kernel synthesis
/// budget at time t, using the exact grid dispersion relation.
int needed_modes(int res, double t) {
  const int n = res * res;
  const double dx = kTwoPi / res;
  const double scale = 4.0 / (dx * dx);
  std::vector<double> lam;
  lam.reserve(n);
  for (int j = 0; j < res; ++j) {
    for (int l = 0; l < res; ++l) {
      const double sj = std::sin(M_PI * j / res);
      const double sl = std::sin(M_PI * l / res);
      lam.push_back(scale * (sj * sj + sl * sl));
    }
  }
  std::sort(lam.begin(), lam.end());
  for (int k = n / 4 + 1; k < n; ++k) {
    if ((n - k) * std::exp(-lam[k] * t) <= 1e-8) return k;
  }
  return n;
}

struct Shared64 {
  ManifoldPtr manifold;
  LaplacianOperator op;
  SpectralData spectrum;
};

const Shared64& shared64() {
  static const Shared64 s = [] {
    ManifoldPtr m = build_flat_torus({64, 64}, {kTwoPi, kTwoPi});
    LaplacianOperator op = assemble_laplacian(m, Measure::mu);
    SpectralData sd = low_spectrum(op, needed_modes(64, 0.05));
    return Shared64{m, std::move(op), std::move(sd)};
  }();
  return s;
}

FlowState kernel_start(const Shared64& s, double t) {
  KernelSpec spec;
  spec.t = t;
  return FlowState{heat_kernel(s.spectrum, *s.manifold, spec), t,
                   Measure::mu};
}

// ---- criterion 1 -----------------------------------------------------------

Outcome minimizer_closed_form() {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> omega_dist(1e-6, 100.0);
  std::uniform_real_distribution<double> dim_dist(1.0, 5.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double omega = omega_dist(rng);
    const double d = dim_dist(rng);
    const auto h = [&](double s) { return omega * s - 0.5 * d * std::log(s); };
    double lo = 1e-9;
    double hi = 1e9;
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = hi - ratio * (hi - lo);
    double b = lo + ratio * (hi - lo);
    double ha = h(a);
    double hb = h(b);
    for (int it = 0; it < 240; ++it) {
      if (ha < hb) {
        hi = b;
        b = a;
        hb = ha;
        a = hi - ratio * (hi - lo);
        ha = h(a);
      } else {
        lo = a;
        a = b;
        ha = hb;
        b = lo + ratio * (hi - lo);
        hb = h(b);
      }
    }
    const double golden = h(0.5 * (lo + hi));
    worst = std::max(worst, std::abs(scale_tradeoff_min(omega, d).value -
                                     golden));
  }
  return {worst <= 1e-8, fmt("worst |closed - golden| = %.2e", worst)};
}

// ---- criterion 2 -----------------------------------------------------------

Outcome euclidean_constants() {
  const std::vector<double> times = {0.05, 0.1, 0.3, 1.0, 3.0, 10.0};
  double worst_w = 0.0;
  double worst_y0 = 0.0;
  double worst_spread = 0.0;
  double worst_gap = 0.0;
  for (int n = 1; n <= 3; ++n) {
    double y0_min = 1e300;
    double y0_max = -1e300;
    for (double t : times) {
      const EuclideanEntropy quad = euclidean_quadrature(n, t, 1e-12);
      worst_w = std::max(worst_w, std::abs(quad.w));
      worst_y0 = std::max(worst_y0,
                          std::abs(quad.y0 + lower_bound_offset(n)));
      y0_min = std::min(y0_min, quad.y0);
      y0_max = std::max(y0_max, quad.y0);
    }
    worst_spread = std::max(worst_spread, y0_max - y0_min);
    const TraceTable trace = oracle_trace(n, 0.0, times);
    const int gc = trace.column("rigidity_gap");
    for (const auto& row : trace.rows) {
      worst_gap = std::max(worst_gap, std::abs(row[gc]));
    }
  }
  const bool pass = worst_w <= 1e-8 && worst_y0 <= 1e-8 &&
                    worst_spread <= 1e-8 && worst_gap == 0.0;
  return {pass, fmt("|W| %.1e, |y0 + b(n)| %.1e, y0 spread %.1e, gap %.1e",
                    worst_w, worst_y0, worst_spread, worst_gap)};
}

// ---- criterion 3 -----------------------------------------------------------

Outcome euclidean_decay_rate() {
  const double h = 3e-5;
  double worst_fd = 0.0;
  double worst_trace = 0.0;
  for (int n = 1; n <= 3; ++n) {
    for (double a : {0.25, 1.0}) {
      const std::vector<double> times = {0.2, 0.5, 1.0, 3.0};
      for (double t : times) {
        const auto ya = [&](double tt) {
          const EuclideanEntropy q = euclidean_quadrature(n, tt, 1e-12);
          return q.entropy + 0.5 * n * std::log(q.dirichlet + a) -
                 4.0 * a * tt;
        };
        const double fd = (ya(t + h) - ya(t - h)) / (2.0 * h);
        worst_fd = std::max(worst_fd,
                            std::abs(fd + euclidean_ya_rate(n, t, a)));
      }
      const TraceTable trace = oracle_trace(n, a, times);
      const int dc = trace.column("dissipation");
      for (std::size_t i = 0; i < times.size(); ++i) {
        worst_trace = std::max(
            worst_trace,
            std::abs(trace.rows[i][dc] - euclidean_ya_rate(n, times[i], a)));
      }
    }
  }
  const bool pass = worst_fd <= 1e-6 && worst_trace <= 1e-6;
  return {pass, fmt("|fd + rate| %.2e, trace dissipation gap %.1e", worst_fd,
                    worst_trace)};
}

// ---- criterion 4 -----------------------------------------------------------

struct EqualityLevel {
  double worst = 0.0;
  double budget = 0.0;
};

// Budget constant for the [0.05, 2] window.  The left endpoint dominates:
// sampled continuum states already show the same mismatch there, with an
// implied constant of 22 at res 32 and 21 at res 64, so the residual is
// quadrature-order and 45 carries a 2x safety factor at both levels.
constexpr double kRateIdentityC = 45.0;

EqualityLevel torus_equality_level(int res, double dt, int samples,
                                   const Shared64* shared) {
  const double dx = kTwoPi / res;
  TraceTable trace;
  if (shared) {
    const StateProvider provider = stepping_provider(
        shared->op, kernel_start(*shared, 0.05), dt, Scheme::crank_nicolson);
    trace = run_trace(shared->op, uniform_times(0.05, 2.0, samples), 0.0,
                      provider);
  } else {
    ManifoldPtr m = build_flat_torus({res, res}, {kTwoPi, kTwoPi});
    const LaplacianOperator op = assemble_laplacian(m, Measure::mu);
    const SpectralData sd = low_spectrum(op, needed_modes(res, 0.05));
    KernelSpec spec;
    spec.t = 0.05;
    FlowState initial{heat_kernel(sd, *m, spec), 0.05, Measure::mu};
    const StateProvider provider =
        stepping_provider(op, std::move(initial), dt, Scheme::crank_nicolson);
    trace = run_trace(op, uniform_times(0.05, 2.0, samples), 0.0, provider);
  }
  EqualityLevel level;
  level.budget = kRateIdentityC * (dx * dx + dt);
  level.worst =
      verify_rate_equality(trace, "w", "w_dissipation", level.budget, "eq")
          .worst;
  return level;
}

Outcome torus_entropy_rate_identity() {
  const EqualityLevel coarse = torus_equality_level(32, 0.01625, 21, nullptr);
  const EqualityLevel fine =
      torus_equality_level(64, 0.00375, 41, &shared64());
  const double shrink = coarse.worst / fine.worst;
  const bool pass = coarse.worst <= coarse.budget &&
                    fine.worst <= fine.budget && shrink >= 3.0;
  return {pass,
          fmt("res32 %.2e <= %.2e, res64 %.2e <= %.2e, shrink %.2fx",
              coarse.worst, coarse.budget, fine.worst, fine.budget, shrink)};
}

// ---- criterion 5 -----------------------------------------------------------

// Budget constant for the decay-bound windows.  For a = -0.5 the inequality
// is near-tight at both window ends (near-Gaussian state on the left, the
// omega -> 0 domain boundary at t ~ 0.47 on the right), leaving a measured
// quadrature-error floor of 5.4 dx^2 at res 64 and 6.4 dx^2 at res 128; 20
// covers the window-worst residual with a 3.4x margin.
constexpr double kDecayBoundC = 20.0;

Outcome torus_entropy_decay_bound() {
  const Shared64& s = shared64();
  const double dx = kTwoPi / 64;

  const auto window = [&](double a, double t0, double t1, int samples,
                          double dt) {
    const StateProvider provider = stepping_provider(
        s.op, kernel_start(s, t0), dt, Scheme::crank_nicolson);
    const TraceTable trace =
        run_trace(s.op, uniform_times(t0, t1, samples), a, provider);
    const double budget = kDecayBoundC * (dx * dx + dt);
    const Verdict ineq =
        verify_dissipation(trace, "ya", "dissipation", budget, "ineq");
    const Verdict mono = verify_monotone(trace, "ya", 1e-6, "mono");
    return std::pair{ineq, mono};
  };

  // The a = -0.5 window keeps omega = dirichlet + a above 0.2; past t ~ 0.4
  // the functional approaches its domain boundary and blows up.
  const auto [ineq_pos, mono_pos] = window(0.5, 0.15, 2.0, 21, 0.0025);
  const auto [ineq_neg, mono_neg] = window(-0.5, 0.2, 0.35, 13, 0.0025);
  const bool pass = ineq_pos.pass && mono_pos.pass && ineq_neg.pass &&
                    mono_neg.pass;
  return {pass,
          fmt("a=+0.5: ineq %.2e <= %.2e, mono %.2e; a=-0.5: ineq %.2e <= "
              "%.2e, mono %.2e",
              ineq_pos.worst, ineq_pos.tolerance, mono_pos.worst,
              ineq_neg.worst, ineq_neg.tolerance, mono_neg.worst)};
}

// ---- criterion 6 -----------------------------------------------------------

Outcome sphere_spectrum_monotonicity() {
  ManifoldPtr m = build_sphere(4, 1.0);
  const LaplacianOperator op = assemble_laplacian(m, Measure::mu);
  const SpectralData sd = low_spectrum(op, 12);
  int multiplicity = 0;
  for (int i = 0; i < sd.count(); ++i) {
    if (std::abs(sd.eigenvalues[i] - sd.first_nonzero) <=
        0.01 * sd.first_nonzero) {
      ++multiplicity;
    }
  }
  const double gap_err = std::abs(sd.first_nonzero - 2.0);

  const TraceTable trace =
      run_trace_for(registry_scenario("sphere_kernel"), nullptr);
  const Verdict mono_w = verify_monotone(trace, "w", 1e-6, "w");
  const Verdict mono_ya = verify_monotone(trace, "ya", 1e-6, "ya");

  const bool pass = gap_err <= 0.02 && multiplicity == 3 && mono_w.pass &&
                    mono_ya.pass;
  return {pass,
          fmt("lambda_1 = %.6f (mult %d), mono W %.2e, mono Ya %.2e",
              sd.first_nonzero, multiplicity, mono_w.worst, mono_ya.worst)};
}

// ---- criterion 7 -----------------------------------------------------------

EqualityLevel weighted_equality_level(int res, double dt, int samples,
                                      int modes) {
  ManifoldPtr base = build_flat_torus({res, res}, {kTwoPi, kTwoPi});
  ScalarField h = constant_field(*base, 0.0);
  for (int v = 0; v < base->vertex_count(); ++v) {
    h.values[v] = 0.3 * std::cos(base->positions()(v, 0));
  }
  ManifoldPtr m = attach_weight(base, h, 4.0);
  const LaplacianOperator op = assemble_laplacian(m, Measure::nu);
  const SpectralData sd = low_spectrum(op, modes);
  KernelSpec spec;
  spec.t = 0.5;
  FlowState initial{heat_kernel(sd, *m, spec), 0.5, Measure::nu};
  const StateProvider provider =
      stepping_provider(op, std::move(initial), dt, Scheme::crank_nicolson);
  const TraceTable trace =
      run_trace(op, uniform_times(0.5, 1.5, samples), 0.2, provider);

  const double c = family_tolerances(ScenarioKind::weighted_torus).c_equality;
  const double dx = kTwoPi / res;
  EqualityLevel level;
  level.budget = c * (dx * dx + dt);
  level.worst =
      verify_rate_equality(trace, "w", "w_dissipation", level.budget, "eq")
          .worst;
  return level;
}

Outcome weighted_rate_identity() {
  const EqualityLevel coarse = weighted_equality_level(32, 0.02, 11, 400);
  const EqualityLevel fine = weighted_equality_level(64, 0.005, 21, 512);
  const double shrink = coarse.worst / fine.worst;

  // h == 0 reduction: the weighted functionals at effective dimension m
  // reproduce the plain ones evaluated at dimension m, and the weighted
  // rate reduces to the plain rate plus the (m-n)/(2 tau) completion term.
  ManifoldPtr base = build_flat_torus({32, 32}, {kTwoPi, kTwoPi});
  ManifoldPtr flat = attach_weight(base, constant_field(*base, 0.0), 4.0);
  const LaplacianOperator op_w = assemble_laplacian(flat, Measure::nu);
  const LaplacianOperator op_b = assemble_laplacian(base, Measure::mu);
  const double t = 0.6;
  const ScalarField img_w = torus_heat_state_images(*flat, 0, t);
  const ScalarField img_b = torus_heat_state_images(*base, 0, t);
  const EntropyTerms terms_b = entropy_terms(sqrt_state(img_b), op_b);
  const double red_ha =
      std::abs(weighted_ha(sqrt_state(img_w), op_w, 0.2, t) -
               adjusted_ya(terms_b, 4.0, 0.2, t));
  const LogDensity ld_w = log_density(img_w, *flat, Measure::nu, t);
  const LogDensity ld_b = log_density(img_b, *base, Measure::mu, t);
  const double red_rate =
      std::abs(weighted_dissipation(img_w, ld_w, op_w).rate -
               (w_dissipation(img_b, ld_b, op_b) + 2.0 / (2.0 * t)));
  const double reduction = std::max(red_ha, red_rate);

  const bool pass = coarse.worst <= coarse.budget &&
                    fine.worst <= fine.budget && shrink >= 3.0 &&
                    reduction <= 1e-10;
  return {pass,
          fmt("res32 %.2e <= %.2e, res64 %.2e <= %.2e, shrink %.2fx, h=0 "
              "reduction %.1e",
              coarse.worst, coarse.budget, fine.worst, fine.budget, shrink,
              reduction)};
}

// ---- criterion 8 -----------------------------------------------------------

Outcome entropy_identity_suite() {
  ManifoldPtr m = build_flat_torus({32, 32}, {kTwoPi, kTwoPi});
  const LaplacianOperator op = assemble_laplacian(m, Measure::mu);
  const SpectralData sd = low_spectrum(op, 32 * 32);
  const double d = 2.0;

  double worst_rewrite = 0.0;
  double worst_matched = 0.0;
  double worst_relation = 0.0;
  double worst_slack = 1e300;
  for (double t : {0.2, 0.5, 1.0}) {
    KernelSpec spec;
    spec.t = t;
    const ScalarField u_tilde = heat_kernel(sd, *m, spec);
    const ScalarField u = sqrt_state(u_tilde);
    const EntropyTerms terms = entropy_terms(u, op);

    // rewrite in logarithmic coordinates: the integral of (f - d) u~ plus
    // the Dirichlet term must reproduce the entropy-based form exactly
    const LogDensity ld = log_density(u_tilde, *m, Measure::mu, t);
    if (ld.masked_count != 0) {
      return {false, fmt("log-density masked %d vertices", ld.masked_count)};
    }
    ScalarField integrand = constant_field(*m, 0.0);
    integrand.values =
        (ld.f.values.array() - d).matrix().cwiseProduct(u_tilde.values);
    const double direct =
        4.0 * t * terms.dirichlet + integrate(integrand, *m, Measure::mu);
    worst_rewrite = std::max(worst_rewrite,
                             std::abs(direct - w_entropy(terms, d, t)));

    // negative shift scaled to the state so omega stays in the domain as
    // the Dirichlet energy decays along the flow
    for (double a : {0.0, 0.4, -0.5 * terms.dirichlet}) {
      const double omega = terms.dirichlet + a;
      const double tau_star = d / (8.0 * omega);
      const double bound = entropy_lower_bound(terms, d, a);
      worst_matched = std::max(
          worst_matched, std::abs(w_entropy(terms, d, tau_star) - bound));
      const double via_ya = log_entropy_ya(terms, d, a) -
                            d * a / (2.0 * omega) + lower_bound_offset(d);
      worst_relation = std::max(worst_relation, std::abs(bound - via_ya));
    }

    const double floor = entropy_lower_bound(terms, d, 0.0);
    for (int i = 0; i < 30; ++i) {
      const double tau = 0.02 * std::pow(5.0 / 0.02, i / 29.0);
      worst_slack =
          std::min(worst_slack, w_entropy(terms, d, tau) - floor);
    }
  }
  const bool pass = worst_rewrite <= 1e-9 && worst_matched <= 1e-10 &&
                    worst_relation <= 1e-12 && worst_slack >= -1e-9;
  return {pass,
          fmt("rewrite %.1e, matched-scale %.1e, ya relation %.1e, slack "
              "%.1e",
              worst_rewrite, worst_matched, worst_relation, worst_slack)};
}

// ---- criterion 9 -----------------------------------------------------------

Outcome conservation_equivalence() {
  const Shared64& s = shared64();

  FlowState stepped = kernel_start(s, 0.1);
  Stepper stepper(s.op, 0.0025, Scheme::crank_nicolson);
  stepper.run_steps(stepped, 160);
  const double drift = stepper.stats().max_raw_drift;

  const StateProvider spectral = spectral_provider(s.spectrum, s.manifold, 0,
                                                   1e-8);
  const FlowState synth = spectral(0.5);
  const double sup_evolution =
      (synth.u_tilde.values - stepped.u_tilde.values).cwiseAbs().maxCoeff();

  // two independent continuum routes to the same kernel: lattice image sums
  // versus the sampled Fourier series (Poisson summation identity)
  const double t = 0.1;
  const ScalarField images = torus_heat_state_images(*s.manifold, 0, t);
  const auto theta = [&](double x) {
    double total = 1.0;
    for (int j = 1; j <= 25; ++j) {
      total += 2.0 * std::exp(-j * j * t) * std::cos(j * x);
    }
    return total / kTwoPi;
  };
  ScalarField fourier = constant_field(*s.manifold, 0.0);
  for (int v = 0; v < s.manifold->vertex_count(); ++v) {
    fourier.values[v] =
        theta(s.manifold->positions()(v, 0)) *
        theta(s.manifold->positions()(v, 1));
  }
  fourier.values /= integrate(fourier, *s.manifold, Measure::mu);
  const double sup_kernel =
      (fourier.values - images.values).cwiseAbs().maxCoeff();

  const bool pass =
      drift <= 1e-12 && sup_evolution <= 1e-4 && sup_kernel <= 1e-6;
  return {pass,
          fmt("step drift %.1e, spectral vs stepped %.2e, images vs fourier "
              "%.1e",
              drift, sup_evolution, sup_kernel)};
}

// ---- criterion 10 ----------------------------------------------------------

Outcome negative_controls() {
  const ScenarioConfig oracle = default_config(ScenarioKind::euclidean_oracle);
  const TraceTable base =
      oracle_trace(oracle.geometry.dimension, oracle.a, sample_times(oracle));

  int defeated = 0;
  {
    TraceTable t1 = base;
    t1.rows[7][t1.column("ya")] *= -1.0;
    defeated += !verify_monotone(t1, "ya", 1e-12, "m").pass;
  }
  {
    TraceTable t2 = base;
    t2.rows[7][t2.column("w")] = 1.0;
    defeated += !verify_monotone(t2, "w", 1e-12, "m").pass;
  }
  {
    TraceTable t3 = base;
    const int dc = t3.column("dissipation");
    for (auto& row : t3.rows) row[dc] *= 2.0;
    defeated += !verify_dissipation(t3, "ya", "dissipation", 1e-8, "d").pass;
  }
  {
    TraceTable t4 = base;
    const int wc = t4.column("w_dissipation");
    for (auto& row : t4.rows) row[wc] += 0.5;
    defeated +=
        !verify_rate_equality(t4, "w", "w_dissipation", 1e-8, "e").pass;
  }
  {
    TraceTable t5 = base;
    std::reverse(t5.rows.begin(), t5.rows.end());
    defeated += !verify_monotone(t5, "ya", 1e-12, "m").pass;
  }

  ScenarioConfig torus = default_config(ScenarioKind::torus_kernel);
  torus.geometry.resolution = {16, 16};
  torus.k = 256;
  torus.dt = 0.0025;
  torus.t_start = 0.5;
  torus.t_end = 0.9;
  torus.sample_count = 5;

  std::string msg_violating;
  std::string msg_boundary;
  try {
    torus.a = -5.0;
    run_trace_for(torus, nullptr);
  } catch (const Error& e) {
    msg_violating = e.what();
  }
  try {
    torus.a = -1.0;  // sits exactly at/below the computed gap
    run_trace_for(torus, nullptr);
  } catch (const Error& e) {
    msg_boundary = e.what();
  }
  const bool named =
      msg_violating.find("a > -lambda_1") != std::string::npos &&
      msg_boundary.find("a > -lambda_1") != std::string::npos;

  std::string msg_oracle;
  try {
    parse_config_text("{}", {"kind=euclidean_oracle", "a=-0.1"});
  } catch (const Error& e) {
    msg_oracle = e.what();
  }
  const bool oracle_rejected = !msg_oracle.empty();

  const bool pass = defeated == 5 && named && oracle_rejected;
  return {pass, fmt("%d of 5 corruptions caught, shift constraint named: %s",
                    defeated, named && oracle_rejected ? "yes" : "no")};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*check)();
    double time_limit;  // seconds, 0 = unlimited
  };
  const Criterion criteria[] = {
      {"minimizer-closed-form", &minimizer_closed_form, 1.0},
      {"euclidean-constants", &euclidean_constants, 5.0},
      {"euclidean-decay-rate", &euclidean_decay_rate, 5.0},
      {"torus-entropy-rate-identity", &torus_entropy_rate_identity, 120.0},
      {"torus-entropy-decay-bound", &torus_entropy_decay_bound, 120.0},
      {"sphere-spectrum-monotonicity", &sphere_spectrum_monotonicity, 180.0},
      {"weighted-rate-identity", &weighted_rate_identity, 180.0},
      {"entropy-identity-suite", &entropy_identity_suite, 60.0},
      {"conservation-equivalence", &conservation_equivalence, 120.0},
      {"negative-controls", &negative_controls, 0.0},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criterion.check();
    } catch (const std::exception& e) {
      outcome = {false, e.what()};
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      start)
            .count();
    if (criterion.time_limit > 0.0 && elapsed > criterion.time_limit) {
      outcome.pass = false;
      outcome.detail += fmt(" [over %.0f s limit]", criterion.time_limit);
    }
    std::printf("%-30s %s  (%6.2f s)  %s\n", criterion.name,
                outcome.pass ? "PASS" : "FAIL", elapsed,
                outcome.detail.c_str());
    std::fflush(stdout);
    failures += outcome.pass ? 0 : 1;
  }
  std::printf("%d of 10 criteria passed\n",
              10 - failures);
  return failures;
}
