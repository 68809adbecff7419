#include <cmath>
#include <stdexcept>

#include "hvi/models.hpp"

namespace hvi {

BayesRegressionDataset simulate_bayes_dataset(std::uint64_t seed, std::size_t n) {
  using Truth = BayesRegressionTruth;
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> design(0.0, Truth::kDesignMax);
  std::normal_distribution<double> noise(0.0, std::sqrt(Truth::kNoiseVariance));
  BayesRegressionDataset data;
  data.seed = seed;
  data.x.reserve(n);
  data.y.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x_true = design(rng);
    const double eps = noise(rng);
    const double zeta = noise(rng);
    data.y.push_back(Truth::kIntercept + Truth::kSlope * x_true + eps);
    data.x.push_back(x_true + zeta);
  }
  return data;
}

OlsFit ordinary_least_squares(const BayesRegressionDataset& data) {
  const std::size_t n = data.size();
  if (n < 3 || data.y.size() != n) throw std::invalid_argument("ordinary_least_squares: need at least 3 pairs");
  const double nn = static_cast<double>(n);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += data.x[i];
    my += data.y[i];
  }
  mx /= nn;
  my /= nn;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (data.x[i] - mx) * (data.x[i] - mx);
    sxy += (data.x[i] - mx) * (data.y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("ordinary_least_squares: degenerate design");
  OlsFit fit{};
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = data.y[i] - fit.intercept - fit.slope * data.x[i];
    rss += r * r;
  }
  fit.residual_sd = std::sqrt(rss / (nn - 2.0));
  fit.slope_se = fit.residual_sd / std::sqrt(sxx);
  fit.intercept_se = fit.residual_sd * std::sqrt(1.0 / nn + mx * mx / sxx);
  return fit;
}

namespace {

struct DefaultProposal {
  Vector mean;
  Vector log_std;
};

DefaultProposal default_regression_proposal(const BayesRegressionDataset& data) {
  DefaultProposal p{Vector(3), Vector(3)};
  if (data.size() >= 3) {
    const OlsFit fit = ordinary_least_squares(data);
    p.mean << fit.intercept, fit.slope, std::log(fit.residual_sd);
    p.log_std << std::log(fit.intercept_se), std::log(fit.slope_se),
        -0.5 * std::log(2.0 * (static_cast<double>(data.size()) - 2.0));
  } else {
    double my = 0.0;
    for (double y : data.y) my += y;
    my /= static_cast<double>(data.size());
    p.mean << my, 0.0, 0.0;
    p.log_std << std::log(10.0), 0.0, 0.0;
  }
  return p;
}

const BayesRegressionDataset& validated(const BayesRegressionDataset& data) {
  if (data.size() == 0) throw std::invalid_argument("bayes_regression: dataset must be non-empty");
  if (data.x.size() != data.y.size()) throw std::invalid_argument("bayes_regression: x and y lengths differ");
  return data;
}

}  // namespace

BayesRegressionModel::BayesRegressionModel(BayesRegressionDataset data)
    : BayesRegressionModel(data, default_regression_proposal(validated(data)).mean,
                           default_regression_proposal(data).log_std) {}

BayesRegressionModel::BayesRegressionModel(BayesRegressionDataset data, const Vector& q_mean,
                                           const Vector& q_log_std)
    : GaussianProposalModel({}, {}, {"alpha", "beta", "log_sigma"}, q_mean, q_log_std),
      data_(validated(data)) {}

double BayesRegressionModel::do_log_target(const Vector& z, const Vector&) const {
  if (z.size() != 3) throw std::invalid_argument("bayes_regression: latent point must have dimension 3");
  const double intercept = z[0];
  const double slope = z[1];
  const double log_sigma = z[2];
  const double inv_var = std::exp(-2.0 * log_sigma);
  double acc = -1.5 * std::log1p(slope * slope);
  const double n = static_cast<double>(data_.size());
  double sq = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i) {
    const double r = data_.y[i] - intercept - slope * data_.x[i];
    sq += r * r;
  }
  acc += -0.5 * sq * inv_var - n * log_sigma - n * 0.91893853320467274178;
  return acc;
}

Vector BayesRegressionModel::do_grad_log_target(const Vector& z, const Vector& lambda) const {
  if (z.size() != 3) throw std::invalid_argument("bayes_regression: latent point must have dimension 3");
  return Vector::Zero(lambda.size());
}

}  // namespace hvi
