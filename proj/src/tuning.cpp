#include "hvi/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hvi {

namespace {

void check_betas(const std::vector<double>& betas) {
  if (betas.size() < 2) throw std::invalid_argument("curve needs at least two beta points");
  for (double b : betas) check_beta(b);
  const auto [lo, hi] = std::minmax_element(betas.begin(), betas.end());
  if (*lo == *hi) throw std::invalid_argument("curve betas must not all coincide");
}

}  // namespace

CurveSummary curve_summary(const ImportanceBatch& batch, double alpha, const std::vector<double>& betas) {
  check_betas(betas);
  const PathSpec spec = PathSpec::holder(alpha);
  CurveSummary out;
  out.alpha = alpha;

  const double beta_bar = mean(betas);
  double sxx = 0.0;
  for (double b : betas) sxx += (b - beta_bar) * (b - beta_bar);

  std::vector<double> influence(batch.size(), 0.0);
  for (double beta : betas) {
    const auto [w, wg] = weighted_integrands(batch, spec, beta);
    CurvePoint pt{beta, local_evidence(batch, spec, beta)};
    const double coef = (beta - beta_bar) / sxx;
    for (std::size_t i = 0; i < batch.size(); ++i) influence[i] += coef * (wg[i] - w[i] * pt.estimate.value);
    out.slope += coef * pt.estimate.value;
    out.points.push_back(pt);
  }
  const auto [lo, hi] = std::minmax_element(out.points.begin(), out.points.end(), [](const auto& a, const auto& b) {
    return a.estimate.value < b.estimate.value;
  });
  out.range = hi->estimate.value - lo->estimate.value;
  double var = 0.0;
  for (double v : influence) var += v * v;
  out.slope_std_err = std::sqrt(var);
  return out;
}

CurveSummary curve_summary(const LatentModel& model, double alpha, const std::vector<double>& betas,
                           std::size_t samples, std::uint64_t seed) {
  return curve_summary(draw_batch(model, samples, seed), alpha, betas);
}

AlphaSearchResult tune_alpha_grid(const ImportanceBatch& batch, const std::vector<double>& candidates,
                                  const std::vector<double>& betas) {
  if (candidates.empty()) throw std::invalid_argument("tune_alpha_grid: no candidates");
  for (double a : candidates)
    if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("tune_alpha_grid: candidates must lie in [0, 1]");
  check_betas(betas);

  AlphaSearchResult result;
  result.method = "grid";
  std::size_t best = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    result.table.push_back(curve_summary(batch, candidates[i], betas));
    result.evaluations += betas.size();
    const auto& cur = result.table.back();
    const auto& inc = result.table[best];
    if (i > 0 && (cur.range < inc.range || (cur.range == inc.range && cur.alpha < inc.alpha))) best = i;
  }
  result.iterations = candidates.size();
  result.final = result.table[best];
  result.alpha_hat = result.final.alpha;
  return result;
}

AlphaSearchResult tune_alpha_grid(const LatentModel& model, const std::vector<double>& candidates,
                                  const std::vector<double>& betas, std::size_t samples, std::uint64_t seed) {
  return tune_alpha_grid(draw_batch(model, samples, seed), candidates, betas);
}

AlphaSearchResult tune_alpha_bisect(const ImportanceBatch& batch, double alpha_left, double alpha_right,
                                    const std::vector<double>& betas, double tolerance, std::size_t max_iters) {
  if (!(alpha_left >= 0.0 && alpha_left < alpha_right && alpha_right <= 1.0))
    throw std::invalid_argument("tune_alpha_bisect: need 0 <= alpha_left < alpha_right <= 1");
  if (!(tolerance > 0.0)) throw std::invalid_argument("tune_alpha_bisect: tolerance must be positive");
  if (max_iters == 0) throw std::invalid_argument("tune_alpha_bisect: max_iters must be positive");
  check_betas(betas);

  AlphaSearchResult result;
  result.method = "bisect";
  auto evaluate = [&](double alpha) -> const CurveSummary& {
    result.table.push_back(curve_summary(batch, alpha, betas));
    result.evaluations += betas.size();
    return result.table.back();
  };

  if (!evaluate(alpha_left).significantly_increasing())
    throw std::invalid_argument("tune_alpha_bisect: curve at alpha_left is not significantly increasing");
  if (!evaluate(alpha_right).significantly_decreasing())
    throw std::invalid_argument("tune_alpha_bisect: curve at alpha_right is not significantly decreasing");

  double lo = alpha_left, hi = alpha_right;
  std::size_t best = 0;
  bool have_mid = false;
  for (std::size_t it = 0; it < max_iters; ++it) {
    const double mid = 0.5 * (lo + hi);
    const CurveSummary& cur = evaluate(mid);
    result.iterations = it + 1;
    const std::size_t idx = result.table.size() - 1;
    if (!have_mid || std::abs(cur.slope) < std::abs(result.table[best].slope)) best = idx;
    have_mid = true;
    result.final = cur;
    result.alpha_hat = mid;
    if (std::abs(cur.slope) < kSlopeSignificance * cur.slope_std_err) {
      result.statistically_flat = true;
      return result;
    }
    if (cur.slope > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < tolerance) return result;
  }
  result.exhausted = true;
  result.final = result.table[best];
  result.alpha_hat = result.final.alpha;
  return result;
}

AlphaSearchResult tune_alpha_bisect(const LatentModel& model, double alpha_left, double alpha_right,
                                    const std::vector<double>& betas, std::size_t samples, double tolerance,
                                    std::size_t max_iters, std::uint64_t seed) {
  return tune_alpha_bisect(draw_batch(model, samples, seed), alpha_left, alpha_right, betas, tolerance, max_iters);
}

}  // namespace hvi
