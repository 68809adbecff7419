#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>

#include "hvi/diagnostics.hpp"
#include "hvi/parallel.hpp"

namespace hvi {

namespace {

constexpr double kTargetAcceptance = 0.3;
constexpr std::size_t kAdaptWindow = 100;

struct Walker {
  const LatentModel& model;
  Eigen::MatrixXd chol;  // lower factor of the proposal covariance shape
  double step;

  // One Metropolis update; returns whether the move was accepted.
  bool advance(Rng& rng, Vector& z, double& log_p) const {
    std::normal_distribution<double> normal;
    Vector eps(z.size());
    for (Eigen::Index d = 0; d < eps.size(); ++d) eps[d] = normal(rng);
    const Vector candidate = z + step * (chol * eps);
    const double candidate_log_p = model.log_target(candidate);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    if (std::isfinite(candidate_log_p) && std::log(unif(rng)) < candidate_log_p - log_p) {
      z = candidate;
      log_p = candidate_log_p;
      return true;
    }
    return false;
  }
};

}  // namespace

Eigen::MatrixXd McmcReference::chain(std::size_t c) const {
  if (c >= chains) throw std::out_of_range("mcmc: chain index out of range");
  return samples.middleRows(static_cast<Eigen::Index>(c * per_chain), static_cast<Eigen::Index>(per_chain));
}

McmcReference mcmc_reference(const LatentModel& model, const McmcConfig& config) {
  if (config.chains == 0) throw std::invalid_argument("mcmc: chains must be positive");
  if (config.thin == 0) throw std::invalid_argument("mcmc: thin must be positive");
  if (config.burn_in >= config.steps) throw std::invalid_argument("mcmc: burn_in must be smaller than steps");
  if (!(config.step_size > 0.0)) throw std::invalid_argument("mcmc: step_size must be positive");
  if (!(config.overdispersion >= 1.0)) throw std::invalid_argument("mcmc: overdispersion must be at least 1");
  if (config.pilot_steps < 2 * kAdaptWindow) throw std::invalid_argument("mcmc: pilot_steps must be at least 200");

  const auto dim = static_cast<Eigen::Index>(model.latent_dim());
  const Vector& lambda = model.parameters().values();

  // Initial shape from proposal draws.
  const Eigen::MatrixXd draws = sample_proposal_matrix(model, lambda, 1000, derive_seed(config.seed, 0));
  const Vector q_mean = draws.colwise().mean().transpose();
  Eigen::MatrixXd chol = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index d = 0; d < dim; ++d)
    chol(d, d) = std::sqrt((draws.col(d).array() - q_mean[d]).square().sum() / static_cast<double>(draws.rows() - 1));

  // Pilot: adapt the scale in windows, then refit the covariance on the
  // second half.
  Walker pilot{model, chol, config.step_size};
  Rng pilot_rng = make_rng(config.seed, 1);
  Vector z = q_mean;
  double log_p = model.log_target(z);
  if (!std::isfinite(log_p)) throw NumericalError("mcmc: target is not finite at the proposal mean");
  std::vector<Vector> kept;
  std::size_t accepted = 0;
  for (std::size_t t = 1; t <= config.pilot_steps; ++t) {
    accepted += pilot.advance(pilot_rng, z, log_p) ? 1 : 0;
    if (t % kAdaptWindow == 0) {
      const double rate = static_cast<double>(accepted) / kAdaptWindow;
      pilot.step *= std::exp(rate - kTargetAcceptance);
      accepted = 0;
    }
    if (t > config.pilot_steps / 2) kept.push_back(z);
  }
  Vector pilot_mean = Vector::Zero(dim);
  for (const auto& v : kept) pilot_mean += v;
  pilot_mean /= static_cast<double>(kept.size());
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& v : kept) cov += (v - pilot_mean) * (v - pilot_mean).transpose();
  cov /= static_cast<double>(kept.size() - 1);
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  double tuned = config.step_size;
  if (llt.info() == Eigen::Success && cov.diagonal().minCoeff() > 0.0) {
    chol = llt.matrixL();
    tuned = 2.38 / std::sqrt(static_cast<double>(dim));
  } else {
    tuned = pilot.step;
  }

  // Short second adaptation of the scale under the refitted shape.
  Walker walker{model, chol, tuned};
  accepted = 0;
  for (std::size_t t = 1; t <= config.pilot_steps / 2; ++t) {
    accepted += walker.advance(pilot_rng, z, log_p) ? 1 : 0;
    if (t % kAdaptWindow == 0) {
      walker.step *= std::exp(static_cast<double>(accepted) / kAdaptWindow - kTargetAcceptance);
      accepted = 0;
    }
  }

  McmcReference out;
  out.chains = config.chains;
  out.per_chain = (config.steps - config.burn_in + config.thin - 1) / config.thin;
  out.tuned_step = walker.step;
  out.seed = config.seed;
  out.samples.resize(static_cast<Eigen::Index>(out.chains * out.per_chain), dim);
  out.chain_acceptance.assign(config.chains, 0.0);

  const Eigen::MatrixXd starts = sample_proposal_matrix(model, lambda, config.chains, derive_seed(config.seed, 2));
  parallel_for(config.chains, [&](std::size_t c) {
    Rng rng = make_rng(config.seed, 100 + c);
    Vector zc = q_mean + config.overdispersion * (starts.row(static_cast<Eigen::Index>(c)).transpose() - q_mean);
    double lp = model.log_target(zc);
    if (!std::isfinite(lp)) {
      zc = pilot_mean;
      lp = model.log_target(zc);
    }
    std::size_t acc = 0;
    std::size_t row = c * out.per_chain;
    for (std::size_t t = 0; t < config.steps; ++t) {
      acc += walker.advance(rng, zc, lp) ? 1 : 0;
      if (t >= config.burn_in && (t - config.burn_in) % config.thin == 0)
        out.samples.row(static_cast<Eigen::Index>(row++)) = zc.transpose();
    }
    out.chain_acceptance[c] = static_cast<double>(acc) / static_cast<double>(config.steps);
  });
  for (std::size_t c = 0; c < config.chains; ++c)
    if (out.chain_acceptance[c] == 0.0)
      throw NumericalError("mcmc: chain " + std::to_string(c) + " accepted no proposals");
  out.acceptance_rate = mean(out.chain_acceptance);
  return out;
}

}  // namespace hvi
