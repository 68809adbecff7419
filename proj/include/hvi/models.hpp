#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "hvi/numeric.hpp"

namespace hvi {

/// Flat parameter vector lambda = (theta, phi) with one name per component.
/// theta holds model parameters, phi the proposal parameters.
class ModelParameters {
 public:
  ModelParameters() = default;
  ModelParameters(std::vector<std::string> theta_names, std::vector<double> theta_values,
                  std::vector<std::string> phi_names, std::vector<double> phi_values);

  const Vector& values() const { return values_; }
  void set_values(const Vector& values);

  std::size_t size() const { return names_.size(); }
  std::size_t theta_size() const { return theta_size_; }
  std::size_t phi_size() const { return names_.size() - theta_size_; }
  std::size_t phi_offset() const { return theta_size_; }

  const std::vector<std::string>& names() const { return names_; }
  const std::string& name_of(std::size_t index) const;
  std::size_t index_of(std::string_view name) const;
  double value(std::string_view name) const { return values_[static_cast<Eigen::Index>(index_of(name))]; }

 private:
  std::vector<std::string> names_;
  std::size_t theta_size_ = 0;
  Vector values_;
};

struct Interval {
  double lo;
  double hi;
};

/// A latent-variable model: an unnormalized target log p(x, z), a normalized
/// proposal log q(z | x) with a sampler, and optional parameter gradients.
/// Evaluators are pure functions of (z, lambda) and are safe to call
/// concurrently; randomness is confined to the caller-owned Rng.
class LatentModel {
 public:
  virtual ~LatentModel() = default;

  virtual std::string_view id() const = 0;
  virtual std::size_t latent_dim() const = 0;
  virtual bool has_gradients() const { return false; }

  const ModelParameters& parameters() const { return params_; }
  void set_parameter_values(const Vector& lambda) { params_.set_values(lambda); }

  double log_target(const Vector& z) const { return do_log_target(z, params_.values()); }
  double log_target(const Vector& z, const Vector& lambda) const { return do_log_target(z, lambda); }
  double log_proposal(const Vector& z) const { return do_log_proposal(z, params_.values()); }
  double log_proposal(const Vector& z, const Vector& lambda) const { return do_log_proposal(z, lambda); }
  Vector sample_proposal(Rng& rng) const { return do_sample_proposal(rng, params_.values()); }
  Vector sample_proposal(Rng& rng, const Vector& lambda) const { return do_sample_proposal(rng, lambda); }

  /// Gradients with respect to the full flattened lambda. Throw
  /// std::logic_error when the model has no gradient capability.
  Vector grad_log_target(const Vector& z, const Vector& lambda) const;
  Vector grad_log_proposal(const Vector& z, const Vector& lambda) const;

  /// Per-dimension integration box used by the quadrature oracle.
  std::vector<Interval> quadrature_domain() const { return do_quadrature_domain(params_.values()); }
  std::vector<Interval> quadrature_domain(const Vector& lambda) const { return do_quadrature_domain(lambda); }

 protected:
  explicit LatentModel(ModelParameters params) : params_(std::move(params)) {}

  virtual double do_log_target(const Vector& z, const Vector& lambda) const = 0;
  virtual double do_log_proposal(const Vector& z, const Vector& lambda) const = 0;
  virtual Vector do_sample_proposal(Rng& rng, const Vector& lambda) const = 0;
  virtual Vector do_grad_log_target(const Vector& z, const Vector& lambda) const;
  virtual Vector do_grad_log_proposal(const Vector& z, const Vector& lambda) const;
  virtual std::vector<Interval> do_quadrature_domain(const Vector& lambda) const = 0;

  ModelParameters params_;
};

/// Base for models whose proposal is a diagonal Gaussian stored in phi as
/// (means..., log-stds...). Derived classes supply the target.
class GaussianProposalModel : public LatentModel {
 public:
  std::size_t latent_dim() const override { return dim_; }
  bool has_gradients() const override { return true; }

  Vector proposal_mean(const Vector& lambda) const;
  Vector proposal_log_std(const Vector& lambda) const;

 protected:
  GaussianProposalModel(std::vector<std::string> theta_names, std::vector<double> theta_values,
                        const std::vector<std::string>& coordinate_names, const Vector& mean,
                        const Vector& log_std);

  double do_log_proposal(const Vector& z, const Vector& lambda) const override;
  Vector do_sample_proposal(Rng& rng, const Vector& lambda) const override;
  Vector do_grad_log_proposal(const Vector& z, const Vector& lambda) const override;
  std::vector<Interval> do_quadrature_domain(const Vector& lambda) const override;

  std::size_t dim_;
};

/// pi1 = c * N(z; 0, 1), q = N(0, 1); log p(x) = log c exactly.
/// theta = (log_c), phi is empty.
class ScaledFactorModel final : public LatentModel {
 public:
  explicit ScaledFactorModel(double c);

  std::string_view id() const override { return "scaled_factor"; }
  std::size_t latent_dim() const override { return 1; }
  bool has_gradients() const override { return true; }
  double c() const { return c_; }

 protected:
  double do_log_target(const Vector& z, const Vector& lambda) const override;
  double do_log_proposal(const Vector& z, const Vector& lambda) const override;
  Vector do_sample_proposal(Rng& rng, const Vector& lambda) const override;
  Vector do_grad_log_target(const Vector& z, const Vector& lambda) const override;
  Vector do_grad_log_proposal(const Vector& z, const Vector& lambda) const override;
  std::vector<Interval> do_quadrature_domain(const Vector& lambda) const override;

 private:
  double c_;
};

/// z ~ N(0, 1), x | z ~ N(z, sigma^2). The proposal defaults to the exact
/// posterior N(x / (1 + sigma^2), sigma^2 / (1 + sigma^2)).
class ConjugateGaussianModel final : public GaussianProposalModel {
 public:
  ConjugateGaussianModel(double sigma, double x_obs);
  ConjugateGaussianModel(double sigma, double x_obs, double q_mean, double q_log_std);

  std::string_view id() const override { return "conjugate_gaussian"; }
  double sigma() const { return sigma_; }
  double x_obs() const { return x_obs_; }
  double exact_log_marginal() const;
  double posterior_mean() const;
  double posterior_log_std() const;

 protected:
  double do_log_target(const Vector& z, const Vector& lambda) const override;
  Vector do_grad_log_target(const Vector& z, const Vector& lambda) const override;

 private:
  double sigma_;
  double x_obs_;
};

/// x ~ N(sin z, 0.01), z ~ N(0, 1), with a Gaussian proposal that defaults to
/// the fixed N(0, 1.5^2).
class SinToyModel final : public GaussianProposalModel {
 public:
  static constexpr double kNoiseVariance = 1e-2;
  static constexpr double kDefaultProposalStd = 1.5;

  explicit SinToyModel(double x_obs = 0.0, double q_mean = 0.0, double q_std = kDefaultProposalStd);

  std::string_view id() const override { return "sin_toy"; }
  double x_obs() const { return x_obs_; }

 protected:
  double do_log_target(const Vector& z, const Vector& lambda) const override;
  Vector do_grad_log_target(const Vector& z, const Vector& lambda) const override;

 private:
  double x_obs_;
};

/// y = |z| + xi with xi ~ N(0, 0.1^2), z ~ N(0, I_2). The posterior
/// concentrates on a ring of radius about y.
class RingModel final : public GaussianProposalModel {
 public:
  static constexpr double kNoiseStd = 0.1;

  explicit RingModel(double y_obs = 1.0, const Vector& q_mean = Vector::Zero(2),
                     const Vector& q_std = Vector::Ones(2));

  std::string_view id() const override { return "ring"; }
  double y_obs() const { return y_obs_; }

 protected:
  double do_log_target(const Vector& z, const Vector& lambda) const override;
  Vector do_grad_log_target(const Vector& z, const Vector& lambda) const override;

 private:
  double y_obs_;
};

struct BayesRegressionDataset {
  std::vector<double> x;
  std::vector<double> y;
  std::uint64_t seed = 0;

  std::size_t size() const { return x.size(); }
  bool operator==(const BayesRegressionDataset&) const = default;
};

/// Ground truth used by simulate_bayes_dataset.
struct BayesRegressionTruth {
  static constexpr double kIntercept = 25.0;
  static constexpr double kSlope = 0.5;
  static constexpr double kNoiseVariance = 10.0;
  static constexpr std::size_t kDefaultSize = 20;
  static constexpr double kDesignMax = 100.0;
};

/// x~ ~ U[0, 100], y = 25 + 0.5 x~ + eps, x = x~ + zeta, eps, zeta ~ N(0, 10).
/// Deterministic given the seed.
BayesRegressionDataset simulate_bayes_dataset(std::uint64_t seed,
                                              std::size_t n = BayesRegressionTruth::kDefaultSize);

struct OlsFit {
  double intercept;
  double slope;
  double intercept_se;
  double slope_se;
  double residual_sd;
};
OlsFit ordinary_least_squares(const BayesRegressionDataset& data);

/// Latent z = (alpha, beta, log sigma); prior (1 + beta^2)^(-3/2), flat in
/// log sigma; likelihood prod_i N(y_i; alpha + beta x_i, sigma^2) on the
/// observed pairs. The default proposal is centred on the OLS fit.
class BayesRegressionModel final : public GaussianProposalModel {
 public:
  explicit BayesRegressionModel(BayesRegressionDataset data);
  BayesRegressionModel(BayesRegressionDataset data, const Vector& q_mean, const Vector& q_log_std);

  std::string_view id() const override { return "bayes_regression"; }
  const BayesRegressionDataset& data() const { return data_; }

 protected:
  double do_log_target(const Vector& z, const Vector& lambda) const override;
  Vector do_grad_log_target(const Vector& z, const Vector& lambda) const override;

 private:
  BayesRegressionDataset data_;
};

std::unique_ptr<ScaledFactorModel> make_scaled_factor(double c);
std::unique_ptr<ConjugateGaussianModel> make_conjugate_gaussian(double sigma, double x_obs);
std::unique_ptr<SinToyModel> make_sin_toy(double x_obs = 0.0);
std::unique_ptr<RingModel> make_ring(double y_obs = 1.0);
std::unique_ptr<BayesRegressionModel> make_bayes_regression(BayesRegressionDataset data);

}  // namespace hvi
