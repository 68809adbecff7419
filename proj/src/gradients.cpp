#include "hvi/gradients.hpp"

#include <cmath>
#include <stdexcept>

namespace hvi {

namespace {

// Per-beta pieces of the gradient estimator. `influence` holds, per sample,
// w_s (h_s - mean h) where h_s is the per-sample total; its column sums of
// squares give the delta-method variance.
struct GradientTerms {
  Vector term_i;
  Vector term_ii;
  Eigen::MatrixXd influence;  // samples x parameters
};

GradientTerms gradient_terms(const LatentModel& model, const Vector& lambda, const PathSpec& spec, double beta,
                             const ImportanceBatch& batch) {
  if (!model.has_gradients()) throw std::logic_error(std::string(model.id()) + ": model has no parameter gradients");
  check_beta(beta);
  const std::size_t n = batch.size();
  if (n == 0) throw std::invalid_argument("gradient: empty batch");
  const auto p = lambda.size();
  const PathPoint path(spec, beta);
  const auto lw = path_log_weights(batch, spec, beta);
  const double log_total = log_sum_exp(lw);
  if (!std::isfinite(log_total)) throw NumericalError("gradient: non-finite importance weights");

  // Products with the weight are formed in log domain, as in local_evidence.
  std::vector<double> w(n), wg(n);
  double g_bar = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    const double log_w = lw[s] - log_total;
    w[s] = std::exp(log_w);
    const auto g = path.log_abs_integrand(0.0, batch.log_ratio[s], lw[s]);
    wg[s] = g.sign == 0.0 ? 0.0 : g.sign * std::exp(log_w + g.log_abs);
    g_bar += wg[s];
  }
  if (!std::isfinite(g_bar)) throw NumericalError("gradient: non-finite local evidence");

  GradientTerms out{Vector::Zero(p), Vector::Zero(p), Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), p)};
  for (std::size_t s = 0; s < n; ++s) {
    const auto r = static_cast<Eigen::Index>(s);
    if (w[s] == 0.0) continue;
    const Vector& z = batch.samples[s];
    const Vector d_target = model.grad_log_target(z, lambda);
    const Vector d_proposal = model.grad_log_proposal(z, lambda);
    const auto sens = path_sensitivity(spec, beta, 0.0, batch.log_ratio[s]);
    const Vector d_log_path = sens.log_density_d_log_target * d_target + sens.log_density_d_log_proposal * d_proposal;
    const double w_slope = sens.integrand_slope.sign *
                           std::exp(lw[s] - log_total + sens.integrand_slope.log_abs);
    const Vector w_reinforce = d_log_path * (wg[s] - w[s] * g_bar);
    const Vector w_integrand = w_slope * (d_target - d_proposal);
    out.term_i += w_reinforce;
    out.term_ii += w_integrand;
    out.influence.row(r) = (w_reinforce + w_integrand).transpose();
  }
  const Vector total = out.term_i + out.term_ii;
  for (std::size_t s = 0; s < n; ++s) {
    const auto r = static_cast<Eigen::Index>(s);
    out.influence.row(r) -= w[s] * total.transpose();
  }
  if (!out.term_i.allFinite() || !out.term_ii.allFinite()) throw NumericalError("gradient: non-finite estimate");
  return out;
}

GradientEstimate finish(const Vector& term_i, const Vector& term_ii, const Eigen::MatrixXd& influence) {
  GradientEstimate est;
  est.term_i = term_i;
  est.term_ii = term_ii;
  est.total = term_i + term_ii;
  est.std_err = influence.colwise().squaredNorm().cwiseSqrt().transpose();
  return est;
}

}  // namespace

GradientEstimate local_evidence_grad(const LatentModel& model, const Vector& lambda, const PathSpec& spec,
                                     double beta, const ImportanceBatch& batch) {
  const auto t = gradient_terms(model, lambda, spec, beta, batch);
  return finish(t.term_i, t.term_ii, t.influence);
}

GradientEstimate bound_grad(const LatentModel& model, const Vector& lambda, const BoundSpec& bound,
                            const ImportanceBatch& batch) {
  switch (bound.kind) {
    case BoundKind::Elbo: return local_evidence_grad(model, lambda, PathSpec::geometric(), 0.0, batch);
    case BoundKind::Eubo: return local_evidence_grad(model, lambda, PathSpec::geometric(), 1.0, batch);
    case BoundKind::Wlbo: return local_evidence_grad(model, lambda, PathSpec::wasserstein(), 1.0, batch);
    case BoundKind::Wubo: return local_evidence_grad(model, lambda, PathSpec::wasserstein(), 0.0, batch);
    case BoundKind::Rvi:
    case BoundKind::IwElbo:
      throw std::invalid_argument("bound_grad: no local-evidence gradient estimator for " + bound.id());
    default: break;
  }
  const auto schedule = bound.effective_schedule();
  const auto weights = riemann_weights(schedule.betas(), bound.rule);
  const PathSpec spec = bound.path();
  const auto p = lambda.size();
  Vector term_i = Vector::Zero(p), term_ii = Vector::Zero(p);
  Eigen::MatrixXd influence = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(batch.size()), p);
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] == 0.0) continue;
    const auto t = gradient_terms(model, lambda, spec, schedule.betas()[k], batch);
    term_i += weights[k] * t.term_i;
    term_ii += weights[k] * t.term_ii;
    influence += weights[k] * t.influence;
  }
  return finish(term_i, term_ii, influence);
}

Vector finite_difference_grad(const LatentModel& model, const Vector& lambda, const QuadratureObjective& objective,
                              double step) {
  if (!(step > 0.0)) throw std::invalid_argument("finite_difference_grad: step must be positive");
  Vector grad(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    Vector up = lambda, down = lambda;
    up[i] += step;
    down[i] -= step;
    const double f_up = objective(model, up);
    const double f_down = objective(model, down);
    if (!std::isfinite(f_up) || !std::isfinite(f_down))
      throw NumericalError("finite_difference_grad: non-finite objective");
    grad[i] = (f_up - f_down) / (2.0 * step);
  }
  return grad;
}

QuadratureObjective quadrature_local_evidence_objective(const PathSpec& spec, double beta, GridSpec grid) {
  return [spec, beta, grid = std::move(grid)](const LatentModel& model, const Vector& lambda) {
    return QuadratureTable(model, lambda, grid).local_evidence(spec, beta);
  };
}

QuadratureObjective quadrature_bound_objective(const BoundSpec& bound, GridSpec grid) {
  return [bound, grid = std::move(grid)](const LatentModel& model, const Vector& lambda) {
    const QuadratureTable table(model, lambda, grid);
    switch (bound.kind) {
      case BoundKind::Elbo: return table.local_evidence(PathSpec::geometric(), 0.0);
      case BoundKind::Eubo: return table.local_evidence(PathSpec::geometric(), 1.0);
      case BoundKind::Wlbo: return table.local_evidence(PathSpec::wasserstein(), 1.0);
      case BoundKind::Wubo: return table.local_evidence(PathSpec::wasserstein(), 0.0);
      case BoundKind::IwElbo: return table.log_marginal();
      case BoundKind::Rvi: return table.log_normalizer(PathSpec::geometric(), bound.parameter) / bound.parameter;
      default: break;
    }
    const auto schedule = bound.effective_schedule();
    std::vector<double> values;
    for (double beta : schedule.betas()) values.push_back(table.local_evidence(bound.path(), beta));
    return riemann_integrate(schedule.betas(), values, bound.rule);
  };
}

TrainingTrace train(const LatentModel& model, const Vector& initial_lambda, const TrainConfig& config) {
  if (!model.has_gradients()) throw std::logic_error(std::string(model.id()) + ": model has no parameter gradients");
  if (config.samples == 0) throw std::invalid_argument("train: samples must be positive");
  if (!std::isfinite(config.learning_rate)) throw std::invalid_argument("train: learning rate must be finite");
  const auto& params = model.parameters();
  if (static_cast<std::size_t>(initial_lambda.size()) != params.size())
    throw std::invalid_argument("train: initial lambda has the wrong length");

  TrainingTrace trace;
  trace.parameter_names = params.names();
  trace.config = config;
  Vector mask = Vector::Ones(initial_lambda.size());
  if (!config.update_theta) mask.head(static_cast<Eigen::Index>(params.theta_size())).setZero();

  Vector lambda = initial_lambda;
  for (std::size_t step = 0; step <= config.steps; ++step) {
    ImportanceBatch batch;
    double objective = 0.0;
    try {
      batch = draw_batch(model, lambda, config.samples, derive_seed(config.seed, step));
      objective = evaluate_bound(batch, config.bound);
    } catch (const NumericalError&) {
      trace.diverged = true;
      break;
    }
    trace.rows.push_back({step, objective, lambda});
    if (!std::isfinite(objective)) {
      trace.diverged = true;
      break;
    }
    if (step == config.steps) break;
    const auto grad = bound_grad(model, lambda, config.bound, batch);
    lambda += config.learning_rate * mask.cwiseProduct(grad.total);
    if (!lambda.allFinite()) {
      trace.diverged = true;
      break;
    }
  }
  return trace;
}

}  // namespace hvi
