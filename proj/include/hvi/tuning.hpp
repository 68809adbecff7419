#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hvi/estimators.hpp"

namespace hvi {

/// Slope significance threshold, in standard errors.
inline constexpr double kSlopeSignificance = 3.0;

inline const std::vector<double>& default_test_betas() {
  static const std::vector<double> betas{0.0, 0.25, 0.5, 0.75, 1.0};
  return betas;
}

struct CurvePoint {
  double beta;
  LocalEvidenceEstimate estimate;
};

/// Holder local-evidence curve at a handful of betas, all on one batch.
/// `slope` is the least-squares slope of value against beta; its standard
/// error comes from the joint delta method over the shared batch.
struct CurveSummary {
  double alpha = 0.0;
  std::vector<CurvePoint> points;
  double range = 0.0;
  double slope = 0.0;
  double slope_std_err = 0.0;

  bool significantly_increasing() const { return slope > kSlopeSignificance * slope_std_err; }
  bool significantly_decreasing() const { return slope < -kSlopeSignificance * slope_std_err; }
};

CurveSummary curve_summary(const ImportanceBatch& batch, double alpha, const std::vector<double>& betas);
CurveSummary curve_summary(const LatentModel& model, double alpha, const std::vector<double>& betas,
                           std::size_t samples, std::uint64_t seed);

struct AlphaSearchResult {
  double alpha_hat = 0.0;
  std::string method;
  /// Local-evidence evaluations consumed (one per alpha per beta).
  std::size_t evaluations = 0;
  std::size_t iterations = 0;
  CurveSummary final;
  /// Every curve evaluated, in evaluation order.
  std::vector<CurveSummary> table;
  /// Bisection only: stopped because the midpoint slope was within noise.
  bool statistically_flat = false;
  /// Bisection only: max_iters reached before either stopping rule.
  bool exhausted = false;
};

/// Trial and error: the candidate with the smallest estimated range
/// max_beta E - min_beta E; ties go to the smaller alpha. All candidates
/// share one batch.
AlphaSearchResult tune_alpha_grid(const ImportanceBatch& batch, const std::vector<double>& candidates,
                                  const std::vector<double>& betas);
AlphaSearchResult tune_alpha_grid(const LatentModel& model, const std::vector<double>& candidates,
                                  const std::vector<double>& betas, std::size_t samples, std::uint64_t seed);

/// Bisection on the sign of the curve slope. Requires a significantly
/// increasing curve at alpha_left and a significantly decreasing one at
/// alpha_right (std::invalid_argument otherwise).
AlphaSearchResult tune_alpha_bisect(const ImportanceBatch& batch, double alpha_left, double alpha_right,
                                    const std::vector<double>& betas, double tolerance, std::size_t max_iters);
AlphaSearchResult tune_alpha_bisect(const LatentModel& model, double alpha_left, double alpha_right,
                                    const std::vector<double>& betas, std::size_t samples, double tolerance,
                                    std::size_t max_iters, std::uint64_t seed);

}  // namespace hvi
