#include "entroflow/entropy.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "entroflow/errors.hpp"

namespace entroflow {

namespace {

void require_unit_mass(const Eigen::VectorXd& density,
                       const Eigen::VectorXd& weights, const char* where) {
  double mass = 0.0;
  for (Eigen::Index i = 0; i < density.size(); ++i) {
    mass += weights[i] * std::max(density[i], 0.0);
  }
  if (std::abs(mass - 1.0) > 1e-8) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s: state mass %.12g is not 1", where,
                  mass);
    fail(ErrorCode::normalization, buf);
  }
}

double checked_omega(double dirichlet, double a) {
  const double omega = dirichlet + a;
  if (!(omega > 0.0)) {
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "shifted energy %.6g + %.6g is not positive", dirichlet, a);
    fail(ErrorCode::nonpositive_omega, buf);
  }
  return omega;
}

// Curvature term Ric(grad, grad) appropriate for the operator: the constant
// model on plain measures, the drift-corrected form on weighted ones.
ScalarField curvature_term(const LaplacianOperator& op,
                           const Eigen::MatrixXd& grad_f) {
  const DiscreteManifold& m = op.manifold();
  if (op.measure() == Measure::nu) {
    const Eigen::MatrixXd grad_h = gradient(m.weight_field(), m);
    const HessianData hess_h = hessian(m.weight_field(), op);
    return bakry_emery_form(m, grad_f, grad_h, hess_h);
  }
  ScalarField sq;
  sq.manifold_id = m.id();
  sq.values.resize(m.vertex_count());
  for (int v = 0; v < m.vertex_count(); ++v) {
    sq.values[v] = grad_f.row(v).squaredNorm();
  }
  return ricci_form(m, sq);
}

}  // namespace

double effective_dim(const LaplacianOperator& op) {
  if (op.measure() == Measure::nu) return op.manifold().be_dimension();
  return static_cast<double>(op.manifold().dimension());
}

EntropyTerms entropy_terms(const ScalarField& u, const LaplacianOperator& op) {
  const DiscreteManifold& m = op.manifold();
  require_same_manifold(u, m, "entropy_terms");
  const Eigen::VectorXd& w = op.mass();

  ScalarField density;
  density.manifold_id = u.manifold_id;
  density.values = u.values.cwiseProduct(u.values);
  require_unit_mass(density.values, w, "entropy_terms");

  EntropyTerms terms;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < density.values.size(); ++i) {
    const double x = density.values[i];
    if (x > 0.0) acc += w[i] * x * std::log(x);
  }
  terms.entropy = -acc;
  terms.dirichlet = integrate(gradient_sq(u, op), m, op.measure());
  return terms;
}

double w_entropy(const EntropyTerms& terms, double d, double tau) {
  if (!(tau > 0.0)) fail(ErrorCode::degenerate_density, "tau must be positive");
  return terms.entropy + 4.0 * tau * terms.dirichlet -
         0.5 * d * std::log(4.0 * M_PI * tau) - d;
}

double w_entropy(const ScalarField& u, const LaplacianOperator& op,
                 double tau) {
  return w_entropy(entropy_terms(u, op), effective_dim(op), tau);
}

double log_entropy_y0(const EntropyTerms& terms, double d) {
  return log_entropy_ya(terms, d, 0.0);
}

double log_entropy_y0(const ScalarField& u, const LaplacianOperator& op) {
  return log_entropy_y0(entropy_terms(u, op), effective_dim(op));
}

double log_entropy_ya(const EntropyTerms& terms, double d, double a) {
  const double omega = checked_omega(terms.dirichlet, a);
  return terms.entropy + 0.5 * d * std::log(omega);
}

double log_entropy_ya(const ScalarField& u, const LaplacianOperator& op,
                      double a) {
  return log_entropy_ya(entropy_terms(u, op), effective_dim(op), a);
}

double adjusted_ya(const EntropyTerms& terms, double d, double a, double t) {
  return log_entropy_ya(terms, d, a) - 4.0 * a * t;
}

double adjusted_ya(const ScalarField& u, const LaplacianOperator& op,
                   double a, double t) {
  return adjusted_ya(entropy_terms(u, op), effective_dim(op), a, t);
}

double weighted_ha(const ScalarField& u, const LaplacianOperator& op,
                   double a, double t) {
  if (op.measure() != Measure::nu) {
    fail(ErrorCode::invalid_dimension,
         "weighted_ha needs the weighted measure");
  }
  return adjusted_ya(u, op, a, t);
}

ScaleMinimum scale_tradeoff_min(double omega, double d) {
  if (!(omega > 0.0)) {
    fail(ErrorCode::nonpositive_omega, "scale trade-off needs omega > 0");
  }
  if (!(d > 0.0)) {
    fail(ErrorCode::invalid_dimension, "scale trade-off needs d > 0");
  }
  ScaleMinimum out;
  out.s_star = 0.5 * d / omega;
  out.value = 0.5 * d * std::log(omega) + 0.5 * d * (1.0 - std::log(0.5 * d));
  return out;
}

double lower_bound_offset(double d) {
  if (!(d > 0.0)) {
    fail(ErrorCode::invalid_dimension, "offset needs d > 0");
  }
  return -0.5 * d * std::log(M_PI) - 0.5 * d * (1.0 + std::log(0.5 * d));
}

double entropy_lower_bound(const EntropyTerms& terms, double d, double a) {
  const double omega = checked_omega(terms.dirichlet, a);
  return terms.entropy + 0.5 * d * std::log(omega) -
         0.5 * d * a / omega + lower_bound_offset(d);
}

double entropy_lower_bound(const ScalarField& u, const LaplacianOperator& op,
                           double a) {
  return entropy_lower_bound(entropy_terms(u, op), effective_dim(op), a);
}

double w_dissipation(const ScalarField& u_tilde, const LogDensity& ld,
                     const LaplacianOperator& op) {
  const DiscreteManifold& m = op.manifold();
  require_same_manifold(u_tilde, m, "w_dissipation");
  require_unit_mass(u_tilde.values, op.mass(), "w_dissipation");
  const double tau = ld.tau;
  const int dim = m.dimension();

  const Eigen::MatrixXd grad_f = gradient(ld.f, m);
  const HessianData hess_f = hessian(ld.f, op);
  const ScalarField ric = curvature_term(op, grad_f);

  const Eigen::VectorXd& w = op.mass();
  double acc = 0.0;
  for (int v = 0; v < m.vertex_count(); ++v) {
    double defect = 0.0;
    for (int a = 0; a < dim; ++a) {
      for (int b = 0; b < dim; ++b) {
        const double target = a == b ? 1.0 / (2.0 * tau) : 0.0;
        const double diff = hess_f.entry(v, a, b) - target;
        defect += diff * diff;
      }
    }
    acc += w[v] * std::max(u_tilde.values[v], 0.0) * 2.0 * tau *
           (defect + ric.values[v]);
  }
  return acc;
}

YaDissipation ya_dissipation(const ScalarField& u,
                             const LaplacianOperator& op, double a) {
  const DiscreteManifold& m = op.manifold();
  require_same_manifold(u, m, "ya_dissipation");
  const EntropyTerms terms = entropy_terms(u, op);
  const double d = effective_dim(op);
  const double omega = checked_omega(terms.dirichlet, a);
  const int dim = m.dimension();

  // fbar = -2 log u on the positivity-floored state.
  const double peak = u.values.cwiseAbs().maxCoeff();
  const double floor_u = 1e-7 * peak;
  ScalarField fbar;
  fbar.manifold_id = u.manifold_id;
  fbar.values.resize(u.values.size());
  for (Eigen::Index i = 0; i < u.values.size(); ++i) {
    fbar.values[i] = -2.0 * std::log(std::max(u.values[i], floor_u));
  }

  const Eigen::MatrixXd grad_f = gradient(fbar, m);
  const HessianData hess_f = hessian(fbar, op);
  const ScalarField ric = curvature_term(op, grad_f);

  const double target = 4.0 * omega / d;
  const Eigen::VectorXd& w = op.mass();
  double acc = 0.0;
  double form_gap = 0.0;
  for (int v = 0; v < m.vertex_count(); ++v) {
    const double uv = std::max(u.values[v], floor_u);
    double defect = 0.0;
    double defect_u = 0.0;
    for (int aa = 0; aa < dim; ++aa) {
      for (int bb = 0; bb < dim; ++bb) {
        const double id_term = aa == bb ? target : 0.0;
        const double entry = hess_f.entry(v, aa, bb);
        const double diff = entry - id_term;
        defect += diff * diff;
        // u-coordinate expansion: with grad u = -u grad fbar / 2 and
        // Hess u = -(u/2) Hess fbar + u (grad fbar x grad fbar)/4, the
        // combination -2 Hess u / u + 2 (grad u x grad u)/u^2 collapses
        // back to Hess fbar; evaluating it spells out every coefficient.
        const double grad_u_a = -0.5 * uv * grad_f(v, aa);
        const double grad_u_b = -0.5 * uv * grad_f(v, bb);
        const double hess_u =
            -0.5 * uv * entry + 0.25 * uv * grad_f(v, aa) * grad_f(v, bb);
        const double entry_u =
            -2.0 * hess_u / uv + 2.0 * grad_u_a * grad_u_b / (uv * uv);
        const double diff_u = entry_u - id_term;
        defect_u += diff_u * diff_u;
      }
    }
    form_gap = std::max(form_gap, std::abs(defect - defect_u));
    acc += w[v] * u.values[v] * u.values[v] * (defect + ric.values[v]);
  }

  YaDissipation out;
  out.omega = omega;
  out.form_gap = form_gap;
  out.rate = 0.25 * d / omega * acc;
  return out;
}

WeightedDissipation weighted_dissipation(const ScalarField& u_tilde,
                                         const LogDensity& ld,
                                         const LaplacianOperator& op) {
  const DiscreteManifold& m = op.manifold();
  require_same_manifold(u_tilde, m, "weighted_dissipation");
  if (op.measure() != Measure::nu || !m.weighted()) {
    fail(ErrorCode::invalid_dimension,
         "weighted_dissipation needs the weighted measure");
  }
  require_unit_mass(u_tilde.values, op.mass(), "weighted_dissipation");
  const double tau = ld.tau;
  const double excess = m.be_dimension() - m.dimension();
  const int dim = m.dimension();

  const Eigen::MatrixXd grad_f = gradient(ld.f, m);
  const HessianData hess_f = hessian(ld.f, op);
  const Eigen::MatrixXd grad_h = gradient(m.weight_field(), m);
  const HessianData hess_h = hessian(m.weight_field(), op);
  const ScalarField ric = bakry_emery_form(m, grad_f, grad_h, hess_h);

  const double drift_coeff = std::sqrt(2.0 * tau / excess);
  const double drift_shift = std::sqrt(excess / (2.0 * tau));
  const Eigen::VectorXd& w = op.mass();
  WeightedDissipation out;
  out.tau = tau;
  for (int v = 0; v < m.vertex_count(); ++v) {
    const double density = std::max(u_tilde.values[v], 0.0) * w[v];
    double defect = 0.0;
    for (int a = 0; a < dim; ++a) {
      for (int b = 0; b < dim; ++b) {
        const double target = a == b ? 1.0 / (2.0 * tau) : 0.0;
        const double diff = hess_f.entry(v, a, b) - target;
        defect += diff * diff;
      }
    }
    out.bracket += density * 2.0 * tau * (defect + ric.values[v]);
    const double dot = grad_h.row(v).dot(grad_f.row(v));
    const double completion = drift_coeff * dot + drift_shift;
    out.drift += density * completion * completion;
  }
  out.rate = out.bracket + out.drift;
  return out;
}

WeightedDissipation weighted_dissipation_omega(const ScalarField& u,
                                               const LaplacianOperator& op,
                                               double a) {
  const EntropyTerms terms = entropy_terms(u, op);
  const double d = effective_dim(op);
  const double omega = checked_omega(terms.dirichlet, a);
  const double tau = 0.125 * d / omega;

  ScalarField density;
  density.manifold_id = u.manifold_id;
  density.values = u.values.cwiseProduct(u.values);
  const LogDensity ld =
      log_density(density, op.manifold(), op.measure(), tau);
  return weighted_dissipation(density, ld, op);
}

double rigidity_gap(const ScalarField& u_tilde, const LogDensity& ld,
                    const LaplacianOperator& op) {
  const DiscreteManifold& m = op.manifold();
  require_same_manifold(u_tilde, m, "rigidity_gap");
  require_unit_mass(u_tilde.values, op.mass(), "rigidity_gap");
  const double tau = ld.tau;
  const int dim = m.dimension();
  const HessianData hess_f = hessian(ld.f, op);
  const Eigen::VectorXd& w = op.mass();
  double acc = 0.0;
  for (int v = 0; v < m.vertex_count(); ++v) {
    double defect = 0.0;
    for (int a = 0; a < dim; ++a) {
      for (int b = 0; b < dim; ++b) {
        const double target = a == b ? 1.0 / (2.0 * tau) : 0.0;
        const double diff = hess_f.entry(v, a, b) - target;
        defect += diff * diff;
      }
    }
    acc += w[v] * std::max(u_tilde.values[v], 0.0) * defect;
  }
  return acc;
}

}  // namespace entroflow
