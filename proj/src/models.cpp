#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hvi/models.hpp"

namespace hvi {

namespace {

constexpr double kHalfLogTwoPi = 0.91893853320467274178;  // 0.5 * log(2 pi)
constexpr double kDomainHalfWidthInStds = 8.0;

std::vector<std::string> prefixed(const std::string& prefix, const std::vector<std::string>& coords) {
  std::vector<std::string> out;
  out.reserve(coords.size());
  for (const auto& c : coords) out.push_back(c.empty() ? prefix : prefix + "_" + c);
  return out;
}

std::vector<std::string> proposal_names(const std::vector<std::string>& coords) {
  auto names = prefixed("q_mean", coords);
  auto stds = prefixed("q_log_std", coords);
  names.insert(names.end(), stds.begin(), stds.end());
  return names;
}

std::vector<double> concat(const Vector& a, const Vector& b) {
  std::vector<double> out(a.data(), a.data() + a.size());
  out.insert(out.end(), b.data(), b.data() + b.size());
  return out;
}

void check_dim(const Vector& z, std::size_t dim) {
  if (static_cast<std::size_t>(z.size()) != dim)
    throw std::invalid_argument("latent point has dimension " + std::to_string(z.size()) + ", expected " +
                                std::to_string(dim));
}

}  // namespace

Vector LatentModel::grad_log_target(const Vector& z, const Vector& lambda) const {
  if (!has_gradients()) throw std::logic_error(std::string(id()) + ": model has no parameter gradients");
  return do_grad_log_target(z, lambda);
}

Vector LatentModel::grad_log_proposal(const Vector& z, const Vector& lambda) const {
  if (!has_gradients()) throw std::logic_error(std::string(id()) + ": model has no parameter gradients");
  return do_grad_log_proposal(z, lambda);
}

Vector LatentModel::do_grad_log_target(const Vector&, const Vector&) const {
  throw std::logic_error(std::string(id()) + ": model has no parameter gradients");
}

Vector LatentModel::do_grad_log_proposal(const Vector&, const Vector&) const {
  throw std::logic_error(std::string(id()) + ": model has no parameter gradients");
}

// ---------------------------------------------------------------------------
// Diagonal Gaussian proposal

GaussianProposalModel::GaussianProposalModel(std::vector<std::string> theta_names,
                                             std::vector<double> theta_values,
                                             const std::vector<std::string>& coordinate_names,
                                             const Vector& mean, const Vector& log_std)
    : LatentModel(ModelParameters(std::move(theta_names), std::move(theta_values),
                                  proposal_names(coordinate_names), concat(mean, log_std))),
      dim_(coordinate_names.size()) {
  if (static_cast<std::size_t>(mean.size()) != dim_ || static_cast<std::size_t>(log_std.size()) != dim_)
    throw std::invalid_argument("proposal mean/log-std length must equal the latent dimension");
}

Vector GaussianProposalModel::proposal_mean(const Vector& lambda) const {
  return lambda.segment(static_cast<Eigen::Index>(params_.phi_offset()), static_cast<Eigen::Index>(dim_));
}

Vector GaussianProposalModel::proposal_log_std(const Vector& lambda) const {
  return lambda.segment(static_cast<Eigen::Index>(params_.phi_offset() + dim_), static_cast<Eigen::Index>(dim_));
}

double GaussianProposalModel::do_log_proposal(const Vector& z, const Vector& lambda) const {
  check_dim(z, dim_);
  const auto off = static_cast<Eigen::Index>(params_.phi_offset());
  const auto d = static_cast<Eigen::Index>(dim_);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double s = lambda[off + d + i];
    const double r = (z[i] - lambda[off + i]) * std::exp(-s);
    acc += -0.5 * r * r - s - kHalfLogTwoPi;
  }
  return acc;
}

Vector GaussianProposalModel::do_sample_proposal(Rng& rng, const Vector& lambda) const {
  const auto off = static_cast<Eigen::Index>(params_.phi_offset());
  const auto d = static_cast<Eigen::Index>(dim_);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector z(d);
  for (Eigen::Index i = 0; i < d; ++i) z[i] = lambda[off + i] + std::exp(lambda[off + d + i]) * normal(rng);
  return z;
}

Vector GaussianProposalModel::do_grad_log_proposal(const Vector& z, const Vector& lambda) const {
  check_dim(z, dim_);
  const auto off = static_cast<Eigen::Index>(params_.phi_offset());
  const auto d = static_cast<Eigen::Index>(dim_);
  Vector g = Vector::Zero(lambda.size());
  for (Eigen::Index i = 0; i < d; ++i) {
    const double inv_sd = std::exp(-lambda[off + d + i]);
    const double r = (z[i] - lambda[off + i]) * inv_sd;
    g[off + i] = r * inv_sd;
    g[off + d + i] = r * r - 1.0;
  }
  return g;
}

std::vector<Interval> GaussianProposalModel::do_quadrature_domain(const Vector& lambda) const {
  const Vector m = proposal_mean(lambda);
  const Vector s = proposal_log_std(lambda);
  std::vector<Interval> box;
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const double half = kDomainHalfWidthInStds * std::exp(s[i]);
    box.push_back({m[i] - half, m[i] + half});
  }
  return box;
}

// ---------------------------------------------------------------------------
// Scaled factor

ScaledFactorModel::ScaledFactorModel(double c)
    : LatentModel(ModelParameters({"log_c"}, {c > 0.0 ? std::log(c) : 0.0}, {}, {})), c_(c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("scaled_factor: c must be positive and finite");
}

double ScaledFactorModel::do_log_target(const Vector& z, const Vector& lambda) const {
  return lambda[0] + do_log_proposal(z, lambda);
}

double ScaledFactorModel::do_log_proposal(const Vector& z, const Vector&) const {
  check_dim(z, 1);
  return -0.5 * z[0] * z[0] - kHalfLogTwoPi;
}

Vector ScaledFactorModel::do_sample_proposal(Rng& rng, const Vector&) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector z(1);
  z[0] = normal(rng);
  return z;
}

Vector ScaledFactorModel::do_grad_log_target(const Vector& z, const Vector&) const {
  check_dim(z, 1);
  return Vector::Ones(1);
}

Vector ScaledFactorModel::do_grad_log_proposal(const Vector& z, const Vector&) const {
  check_dim(z, 1);
  return Vector::Zero(1);
}

std::vector<Interval> ScaledFactorModel::do_quadrature_domain(const Vector&) const {
  return {{-kDomainHalfWidthInStds, kDomainHalfWidthInStds}};
}

// ---------------------------------------------------------------------------
// Conjugate Gaussian

ConjugateGaussianModel::ConjugateGaussianModel(double sigma, double x_obs)
    : ConjugateGaussianModel(sigma, x_obs, x_obs / (1.0 + sigma * sigma),
                             0.5 * std::log(sigma * sigma / (1.0 + sigma * sigma))) {}

ConjugateGaussianModel::ConjugateGaussianModel(double sigma, double x_obs, double q_mean, double q_log_std)
    : GaussianProposalModel({}, {}, {""}, Vector::Constant(1, q_mean), Vector::Constant(1, q_log_std)),
      sigma_(sigma),
      x_obs_(x_obs) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw std::invalid_argument("conjugate_gaussian: sigma must be positive and finite");
}

double ConjugateGaussianModel::exact_log_marginal() const {
  return log_normal_pdf(x_obs_, 0.0, std::sqrt(1.0 + sigma_ * sigma_));
}

double ConjugateGaussianModel::posterior_mean() const { return x_obs_ / (1.0 + sigma_ * sigma_); }

double ConjugateGaussianModel::posterior_log_std() const {
  return 0.5 * std::log(sigma_ * sigma_ / (1.0 + sigma_ * sigma_));
}

double ConjugateGaussianModel::do_log_target(const Vector& z, const Vector&) const {
  check_dim(z, 1);
  return log_normal_pdf(z[0], 0.0, 1.0) + log_normal_pdf(x_obs_, z[0], sigma_);
}

Vector ConjugateGaussianModel::do_grad_log_target(const Vector& z, const Vector& lambda) const {
  check_dim(z, 1);
  return Vector::Zero(lambda.size());
}

// ---------------------------------------------------------------------------
// Sin toy

SinToyModel::SinToyModel(double x_obs, double q_mean, double q_std)
    : GaussianProposalModel({}, {}, {""}, Vector::Constant(1, q_mean),
                            Vector::Constant(1, q_std > 0.0 ? std::log(q_std) : 0.0)),
      x_obs_(x_obs) {
  if (!(q_std > 0.0) || !std::isfinite(q_std)) throw std::invalid_argument("sin_toy: q_std must be positive");
}

double SinToyModel::do_log_target(const Vector& z, const Vector&) const {
  check_dim(z, 1);
  static const double noise_sd = std::sqrt(kNoiseVariance);
  return log_normal_pdf(x_obs_, std::sin(z[0]), noise_sd) + log_normal_pdf(z[0], 0.0, 1.0);
}

Vector SinToyModel::do_grad_log_target(const Vector& z, const Vector& lambda) const {
  check_dim(z, 1);
  return Vector::Zero(lambda.size());
}

// ---------------------------------------------------------------------------
// Ring

namespace {
Vector log_of(const Vector& v) {
  Vector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0)) throw std::invalid_argument("proposal std must be positive");
    out[i] = std::log(v[i]);
  }
  return out;
}
}  // namespace

RingModel::RingModel(double y_obs, const Vector& q_mean, const Vector& q_std)
    : GaussianProposalModel({}, {}, {"z1", "z2"}, q_mean, log_of(q_std)), y_obs_(y_obs) {}

double RingModel::do_log_target(const Vector& z, const Vector&) const {
  check_dim(z, 2);
  const double r = std::hypot(z[0], z[1]);
  return log_normal_pdf(y_obs_, r, kNoiseStd) + log_normal_pdf(z[0], 0.0, 1.0) + log_normal_pdf(z[1], 0.0, 1.0);
}

Vector RingModel::do_grad_log_target(const Vector& z, const Vector& lambda) const {
  check_dim(z, 2);
  return Vector::Zero(lambda.size());
}

// ---------------------------------------------------------------------------
// Factories

std::unique_ptr<ScaledFactorModel> make_scaled_factor(double c) { return std::make_unique<ScaledFactorModel>(c); }

std::unique_ptr<ConjugateGaussianModel> make_conjugate_gaussian(double sigma, double x_obs) {
  return std::make_unique<ConjugateGaussianModel>(sigma, x_obs);
}

std::unique_ptr<SinToyModel> make_sin_toy(double x_obs) { return std::make_unique<SinToyModel>(x_obs); }

std::unique_ptr<RingModel> make_ring(double y_obs) { return std::make_unique<RingModel>(y_obs); }

std::unique_ptr<BayesRegressionModel> make_bayes_regression(BayesRegressionDataset data) {
  return std::make_unique<BayesRegressionModel>(std::move(data));
}

}  // namespace hvi
