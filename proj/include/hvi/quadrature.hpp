#pragma once

#include <functional>
#include <vector>

#include "hvi/models.hpp"
#include "hvi/paths.hpp"

namespace hvi {

struct GridAxis {
  double lo;
  double hi;
  std::size_t points;
};

/// Tensor-product trapezoid grid over at most two latent dimensions.
struct GridSpec {
  static constexpr std::size_t kDefaultPoints1d = 20001;
  static constexpr std::size_t kDefaultPoints2d = 801;

  std::vector<GridAxis> axes;

  /// The model's quadrature domain with the default resolution.
  static GridSpec default_for(const LatentModel& model);
  static GridSpec default_for(const LatentModel& model, const Vector& lambda);
  static GridSpec uniform(const std::vector<Interval>& box, std::size_t points_per_axis);
};

/// Endpoint log-densities of a model tabulated on a grid, with trapezoid
/// log cell weights. All normalizations are carried out in log domain; this
/// is the ground-truth oracle for every sample-based estimator.
class QuadratureTable {
 public:
  QuadratureTable(const LatentModel& model, const Vector& lambda, const GridSpec& grid);
  QuadratureTable(const LatentModel& model, const GridSpec& grid);
  explicit QuadratureTable(const LatentModel& model);

  std::size_t size() const { return log_cell_.size(); }

  /// log of the integral of pi~_1, i.e. log p(x).
  double log_marginal() const;
  /// log of the integral of pi~_beta along the path.
  double log_normalizer(const PathSpec& spec, double beta) const;
  /// E_{pi_beta}[path integrand].
  double local_evidence(const PathSpec& spec, double beta) const;
  /// E_{pi_beta}[fn(L0, L1)].
  double expectation(const PathSpec& spec, double beta,
                     const std::function<double(double, double)>& fn) const;
  /// E_q[fn(L0, L1)] using the proposal (beta = 0 on any path).
  double proposal_expectation(const std::function<double(double, double)>& fn) const;

  const std::vector<double>& log_proposal_values() const { return log_proposal_; }
  const std::vector<double>& log_target_values() const { return log_target_; }

 private:
  std::vector<double> log_cell_;
  std::vector<double> log_proposal_;
  std::vector<double> log_target_;
};

double quadrature_log_marginal(const LatentModel& model, const GridSpec& grid);
double quadrature_log_marginal(const LatentModel& model);
double quadrature_local_evidence(const LatentModel& model, double alpha, double beta, const GridSpec& grid);
double quadrature_local_evidence(const LatentModel& model, const PathSpec& spec, double beta, const GridSpec& grid);

}  // namespace hvi
