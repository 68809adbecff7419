#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hvi/models.hpp"
#include "hvi/paths.hpp"

namespace hvi {

/// Proposal samples with cached endpoint log-densities. One batch is shared
/// by every bound and every beta of an evaluation.
struct ImportanceBatch {
  std::vector<Vector> samples;
  std::vector<double> log_proposal;  // L0
  std::vector<double> log_target;    // L1
  std::vector<double> log_ratio;     // f = L1 - L0
  std::uint64_t seed = 0;

  std::size_t size() const { return samples.size(); }
};

/// Draws S samples from q_lambda; deterministic given the seed.
ImportanceBatch draw_batch(const LatentModel& model, const Vector& lambda, std::size_t samples, std::uint64_t seed);
ImportanceBatch draw_batch(const LatentModel& model, std::size_t samples, std::uint64_t seed);

enum class PartitionKind { Uniform, Log, Explicit };

/// beta_0 = 0 < beta_1 < ... < beta_K = 1.
class PartitionSchedule {
 public:
  static constexpr double kLogFirstBetaExponent = -1.09;

  static PartitionSchedule uniform(std::size_t intervals);
  /// beta_1 = first_beta and beta_1..beta_K evenly spaced in log scale.
  static PartitionSchedule log(std::size_t intervals, double first_beta = std::pow(10.0, kLogFirstBetaExponent));
  static PartitionSchedule from_points(std::vector<double> betas);

  const std::vector<double>& betas() const { return betas_; }
  std::size_t intervals() const { return betas_.size() - 1; }
  PartitionKind kind() const { return kind_; }
  std::string label() const;

 private:
  PartitionSchedule(std::vector<double> betas, PartitionKind kind);
  std::vector<double> betas_;
  PartitionKind kind_;
};

enum class IntegrationRule { Left, Right, Trapezoid };

std::string to_string(IntegrationRule rule);
IntegrationRule parse_integration_rule(const std::string& name);

/// Self-normalized importance-sampling estimate of a local evidence value.
struct LocalEvidenceEstimate {
  double value = 0.0;
  double std_err = 0.0;  // delta-method standard error of the ratio estimator
  double ess = 1.0;      // normalized effective sample size in [1/S, 1]
  bool degenerate = false;  // single-sample batch: std_err is not informative
};

/// Per-sample log importance weights log(pi~_beta / q) on the batch.
std::vector<double> path_log_weights(const ImportanceBatch& batch, const PathSpec& spec, double beta);
std::vector<double> path_integrands(const ImportanceBatch& batch, const PathSpec& spec, double beta);

/// Normalized path weights w_s and products w_s g_s; the products are formed
/// in log domain because g_s alone can overflow where w_s underflows.
struct WeightedIntegrands {
  std::vector<double> weights;
  std::vector<double> weighted;
};
WeightedIntegrands weighted_integrands(const ImportanceBatch& batch, const PathSpec& spec, double beta);

LocalEvidenceEstimate local_evidence(const ImportanceBatch& batch, const PathSpec& spec, double beta);

double elbo(const ImportanceBatch& batch);
double iw_elbo(const ImportanceBatch& batch);
/// (1/alpha) log mean exp(alpha f); alpha must be positive.
double rvi(const ImportanceBatch& batch, double alpha);
/// beta = 1 self-normalized estimate of E_{p(z|x)}[f]; biased for finite S.
double eubo(const ImportanceBatch& batch);

struct WassersteinBounds {
  double wlbo;
  double wubo;
};
WassersteinBounds wasserstein_bounds(const ImportanceBatch& batch);

/// Riemann sum of (beta_k, v_k) over [0, 1].
double riemann_integrate(const std::vector<double>& betas, const std::vector<double>& values, IntegrationRule rule);
double riemann_integrate(const std::vector<std::pair<double, double>>& points, IntegrationRule rule);
/// Weight applied to each schedule point by the rule; sum_k w_k v_k equals
/// riemann_integrate up to rounding.
std::vector<double> riemann_weights(const std::vector<double>& betas, IntegrationRule rule);

struct ThermodynamicEstimate {
  double value = 0.0;
  std::vector<double> betas;
  std::vector<LocalEvidenceEstimate> local;
};

ThermodynamicEstimate thermodynamic_integral(const ImportanceBatch& batch, const PathSpec& spec,
                                             const PartitionSchedule& schedule, IntegrationRule rule);
ThermodynamicEstimate tvo(const ImportanceBatch& batch, const PartitionSchedule& schedule, IntegrationRule rule);
ThermodynamicEstimate hbo(const ImportanceBatch& batch, double alpha, const PartitionSchedule& schedule,
                          IntegrationRule rule);
ThermodynamicEstimate perturbed_hbo(const ImportanceBatch& batch, double delta, const PartitionSchedule& schedule,
                                    IntegrationRule rule);

}  // namespace hvi
