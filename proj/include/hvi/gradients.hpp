#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hvi/bounds.hpp"
#include "hvi/quadrature.hpp"

namespace hvi {

/// Score-function gradient of a local evidence (or of a bound built from
/// local evidences) with respect to lambda = (theta, phi):
///
///   grad E = sum_s w_s grad log pi~(z_s) (g_s - g_bar)   (term_i, REINFORCE)
///          + sum_s w_s grad g_s                           (term_ii, pathwise)
///
/// with self-normalized path weights w_s. `total` is term_i + term_ii.
struct GradientEstimate {
  Vector total;
  Vector term_i;
  Vector term_ii;
  Vector std_err;
};

GradientEstimate local_evidence_grad(const LatentModel& model, const Vector& lambda, const PathSpec& spec,
                                     double beta, const ImportanceBatch& batch);

/// Rule-weighted sum of local_evidence_grad over a bound's schedule. Elbo,
/// Eubo, Wlbo and Wubo are single local evidences; Rvi and IwElbo are rejected.
GradientEstimate bound_grad(const LatentModel& model, const Vector& lambda, const BoundSpec& bound,
                            const ImportanceBatch& batch);

using QuadratureObjective = std::function<double(const LatentModel&, const Vector&)>;

/// Central differences of a deterministic (quadrature) functional of lambda.
Vector finite_difference_grad(const LatentModel& model, const Vector& lambda, const QuadratureObjective& objective,
                              double step);

/// Quadrature E_{spec, beta} on a grid fixed in advance (the grid must not
/// move with lambda while differencing).
QuadratureObjective quadrature_local_evidence_objective(const PathSpec& spec, double beta, GridSpec grid);
/// Quadrature value of a bound's Riemann sum (or single local evidence).
QuadratureObjective quadrature_bound_objective(const BoundSpec& bound, GridSpec grid);

struct TrainConfig {
  BoundSpec bound = BoundSpec::elbo();
  std::size_t samples = 100;
  std::size_t steps = 1000;
  double learning_rate = 1e-2;
  std::uint64_t seed = 0;
  /// Only phi is updated unless this is set.
  bool update_theta = false;
};

struct TraceRow {
  std::size_t step;
  double objective;
  Vector lambda;
};

struct TrainingTrace {
  std::vector<std::string> parameter_names;
  std::vector<TraceRow> rows;
  TrainConfig config;
  bool diverged = false;
};

/// Plain gradient ascent with a fresh batch per step drawn from the step's
/// derived seed. Stops early (diverged = true) on a non-finite lambda or
/// objective, returning the partial trace.
TrainingTrace train(const LatentModel& model, const Vector& initial_lambda, const TrainConfig& config);

}  // namespace hvi
