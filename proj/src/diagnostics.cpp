#include "hvi/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

#include "hvi/parallel.hpp"
#include "hvi/quadrature.hpp"

namespace hvi {

double ess(std::span<const double> log_weights) { return normalized_ess(log_weights); }

CurveProfile curve_profile(const LatentModel& model, const PathSpec& spec, const std::vector<double>& betas,
                           std::size_t samples, std::size_t replicates, std::uint64_t seed) {
  if (replicates < 2) throw std::invalid_argument("curve_profile: need at least two replicates");
  if (betas.empty()) throw std::invalid_argument("curve_profile: need at least one beta");
  for (double b : betas) check_beta(b);
  CurveProfile out;
  out.spec = spec;
  out.betas = betas;
  out.samples = samples;
  out.replicates = replicates;
  out.seed = seed;
  const auto rows = static_cast<Eigen::Index>(replicates);
  const auto cols = static_cast<Eigen::Index>(betas.size());
  out.values.resize(rows, cols);
  out.ess_values.resize(rows, cols);

  parallel_for(replicates, [&](std::size_t r) {
    const auto batch = draw_batch(model, samples, derive_seed(seed, r));
    for (std::size_t k = 0; k < betas.size(); ++k) {
      const auto est = local_evidence(batch, spec, betas[k]);
      out.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = est.value;
      out.ess_values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = est.ess;
    }
  });

  for (Eigen::Index k = 0; k < cols; ++k) {
    std::vector<double> col(out.values.col(k).data(), out.values.col(k).data() + rows);
    out.mean.push_back(hvi::mean(col));
    out.variance.push_back(sample_variance(col));
    out.mean_ess.push_back(out.ess_values.col(k).mean());
  }
  return out;
}

namespace {
std::vector<double> ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}
}  // namespace

RankCorrelation spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3) throw std::invalid_argument("spearman: need equal-length inputs, n >= 3");
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double mx = mean(rx), my = mean(ry);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return {0.0, 1.0};
  const double rho = sxy / std::sqrt(sxx * syy);
  const double n = static_cast<double>(x.size());
  if (std::abs(rho) >= 1.0) return {rho, 0.0};
  const double t = rho * std::sqrt((n - 2.0) / (1.0 - rho * rho));
  boost::math::students_t dist(n - 2.0);
  const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
  return {rho, p};
}

Standardization Standardization::from_sample(const Eigen::MatrixXd& reference) {
  if (reference.rows() == 0) throw std::invalid_argument("standardization: empty reference sample");
  Standardization s;
  s.mean = reference.colwise().mean().transpose();
  s.scale.resize(reference.cols());
  for (Eigen::Index d = 0; d < reference.cols(); ++d) {
    const double var = reference.rows() > 1
                           ? (reference.col(d).array() - s.mean[d]).square().sum() / static_cast<double>(reference.rows() - 1)
                           : 0.0;
    s.scale[d] = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  return s;
}

namespace {
Eigen::MatrixXd standardize(const Eigen::MatrixXd& x, const Standardization& s) {
  Eigen::MatrixXd out = x;
  for (Eigen::Index d = 0; d < x.cols(); ++d) out.col(d) = (x.col(d).array() - s.mean[d]) / s.scale[d];
  return out;
}

double mean_kernel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double inv_two_h2) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    double row = 0.0;
    for (Eigen::Index j = 0; j < b.rows(); ++j) row += std::exp(-(a.row(i) - b.row(j)).squaredNorm() * inv_two_h2);
    acc += row;
  }
  return acc / (static_cast<double>(a.rows()) * static_cast<double>(b.rows()));
}
}  // namespace

double mmd(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Standardization& norm, const MmdConfig& config) {
  if (!(config.bandwidth > 0.0)) throw std::invalid_argument("mmd: bandwidth must be positive");
  if (a.rows() == 0 || b.rows() == 0) throw std::invalid_argument("mmd: samples must be non-empty");
  if (a.cols() != b.cols()) throw std::invalid_argument("mmd: sample dimensions differ");
  if (norm.mean.size() != a.cols() || norm.scale.size() != a.cols())
    throw std::invalid_argument("mmd: normalization dimension mismatch");
  const Eigen::MatrixXd sa = standardize(a, norm);
  const Eigen::MatrixXd sb = standardize(b, norm);
  const double inv = 1.0 / (2.0 * config.bandwidth * config.bandwidth);
  const double sq = mean_kernel(sa, sa, inv) + mean_kernel(sb, sb, inv) - 2.0 * mean_kernel(sa, sb, inv);
  return std::sqrt(std::max(sq, 0.0));
}

double mmd(const Eigen::MatrixXd& sample, const Eigen::MatrixXd& reference, const MmdConfig& config) {
  if (sample.cols() != reference.cols()) throw std::invalid_argument("mmd: sample dimensions differ");
  return mmd(sample, reference, Standardization::from_sample(reference), config);
}

Eigen::MatrixXd sample_proposal_matrix(const LatentModel& model, const Vector& lambda, std::size_t n,
                                       std::uint64_t seed) {
  Rng rng = make_rng(seed);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(model.latent_dim()));
  for (std::size_t i = 0; i < n; ++i) out.row(static_cast<Eigen::Index>(i)) = model.sample_proposal(rng, lambda).transpose();
  return out;
}

ApproxErrorCurve approx_error(const ModelFamily& family, const BoundEvaluator& bound, const std::vector<double>& x_grid,
                              std::size_t samples, std::uint64_t seed) {
  if (x_grid.size() < 2) throw std::invalid_argument("approx_error: need at least two observation points");
  for (std::size_t i = 1; i < x_grid.size(); ++i)
    if (!(x_grid[i] > x_grid[i - 1])) throw std::invalid_argument("approx_error: x grid must be increasing");
  ApproxErrorCurve out;
  out.x = x_grid;
  out.log_marginal.assign(x_grid.size(), 0.0);
  out.bound.assign(x_grid.size(), 0.0);
  parallel_for(x_grid.size(), [&](std::size_t i) {
    const auto model = family(x_grid[i]);
    out.log_marginal[i] = quadrature_log_marginal(*model);
    const auto batch = draw_batch(*model, samples, derive_seed(seed, i));
    out.bound[i] = bound(*model, batch);
    if (!std::isfinite(out.bound[i])) throw NumericalError("approx_error: non-finite bound value");
  });
  std::vector<double> integrand(x_grid.size());
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    const double p = std::exp(out.log_marginal[i]);
    integrand[i] = p * std::abs(p - std::exp(out.bound[i]));
  }
  for (std::size_t i = 0; i + 1 < x_grid.size(); ++i)
    out.error += 0.5 * (x_grid[i + 1] - x_grid[i]) * (integrand[i] + integrand[i + 1]);
  return out;
}

ApproxErrorCurve approx_error(const ModelFamily& family, const BoundSpec& bound, const std::vector<double>& x_grid,
                              std::size_t samples, std::uint64_t seed) {
  return approx_error(
      family, [bound](const LatentModel&, const ImportanceBatch& batch) { return evaluate_bound(batch, bound); }, x_grid,
      samples, seed);
}

}  // namespace hvi
