#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "hvi/bounds.hpp"

namespace hvi {

/// Normalized effective sample size (sum w)^2 / (m sum w^2) from log-weights,
/// in [1/m, 1]. Throws NumericalError when every weight is zero.
double ess(std::span<const double> log_weights);

/// Replicate statistics of a local-evidence curve. Rows of `values` and
/// `ess_values` are replicates, columns are betas.
struct CurveProfile {
  PathSpec spec = PathSpec::geometric();
  std::vector<double> betas;
  std::size_t samples = 0;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  std::vector<double> mean;
  std::vector<double> variance;
  std::vector<double> mean_ess;
  Eigen::MatrixXd values;
  Eigen::MatrixXd ess_values;
};

/// R independent batches (replicate r uses derive_seed(seed, r)).
CurveProfile curve_profile(const LatentModel& model, const PathSpec& spec, const std::vector<double>& betas,
                           std::size_t samples, std::size_t replicates, std::uint64_t seed);

struct RankCorrelation {
  double rho;
  double p_value;  // two-sided, Student-t approximation
};
RankCorrelation spearman(std::span<const double> x, std::span<const double> y);

struct MmdConfig {
  double bandwidth = 0.5;
};

/// Per-dimension affine normalization applied before the kernel.
struct Standardization {
  Vector mean;
  Vector scale;
  static Standardization from_sample(const Eigen::MatrixXd& reference);
};

/// Biased (V-statistic) Gaussian-kernel MMD between the rows of `sample` and
/// `reference`, after standardizing both by the reference mean and std.
/// Returns sqrt(max(MMD^2, 0)).
double mmd(const Eigen::MatrixXd& sample, const Eigen::MatrixXd& reference, const MmdConfig& config = {});
double mmd(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Standardization& norm,
           const MmdConfig& config = {});

struct McmcConfig {
  std::size_t chains = 4;
  std::size_t steps = 6000;
  std::size_t burn_in = 1000;
  std::size_t thin = 1;
  double step_size = 0.5;
  std::uint64_t seed = 0;
  std::size_t pilot_steps = 2000;
  double overdispersion = 2.0;
};

/// Random-walk Metropolis samples from the normalized target. Rows of
/// `samples` are draws, grouped by chain in chain order.
struct McmcReference {
  Eigen::MatrixXd samples;
  std::size_t chains = 0;
  std::size_t per_chain = 0;
  double acceptance_rate = 0.0;
  std::vector<double> chain_acceptance;
  double tuned_step = 0.0;
  std::uint64_t seed = 0;

  Eigen::MatrixXd chain(std::size_t c) const;
};

/// A short pilot tunes a full-covariance Gaussian random walk toward 20-50%
/// acceptance; chains then start from overdispersed proposal draws. A chain
/// that accepts no proposal raises NumericalError.
McmcReference mcmc_reference(const LatentModel& model, const McmcConfig& config);

/// Draws n rows from q_lambda.
Eigen::MatrixXd sample_proposal_matrix(const LatentModel& model, const Vector& lambda, std::size_t n,
                                       std::uint64_t seed);

using ModelFamily = std::function<std::unique_ptr<LatentModel>(double x)>;
using BoundEvaluator = std::function<double(const LatentModel&, const ImportanceBatch&)>;

struct ApproxErrorCurve {
  double error = 0.0;
  std::vector<double> x;
  std::vector<double> log_marginal;
  std::vector<double> bound;
};

/// Trapezoid integral over x of p(x) |p(x) - exp(bound(x))| with p(x) from
/// the quadrature oracle. Observation i uses batch seed derive_seed(seed, i).
ApproxErrorCurve approx_error(const ModelFamily& family, const BoundEvaluator& bound, const std::vector<double>& x_grid,
                              std::size_t samples, std::uint64_t seed);
ApproxErrorCurve approx_error(const ModelFamily& family, const BoundSpec& bound, const std::vector<double>& x_grid,
                              std::size_t samples, std::uint64_t seed);

}  // namespace hvi
