#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace hvi {

using Vector = Eigen::VectorXd;
using Rng = std::mt19937_64;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Raised when a computation produces a non-finite value where a finite one
/// is required (grid evaluations, weights, objectives).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double log_add_exp(double a, double b);
double log_sum_exp(std::span<const double> values);
double log_mean_exp(std::span<const double> values);

/// Softmax of log-weights. Throws NumericalError if every entry is -inf.
std::vector<double> normalize_log_weights(std::span<const double> log_weights);
/// (sum w)^2 / (m sum w^2) from log-weights, clamped to [1/m, 1]; exactly 1
/// for equal weights.
double normalized_ess(std::span<const double> log_weights);

double log_normal_pdf(double x, double mean, double sd);

/// Deterministic RNG for (seed, stream). Streams index replicates, steps and
/// chains so that every task owns an independent generator.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Shortest decimal text that parses back to the same double.
std::string format_shortest(double value);

/// Neumaier-compensated sum.
double compensated_sum(std::span<const double> values);
double mean(std::span<const double> values);
/// Unbiased sample variance; zero for fewer than two values.
double sample_variance(std::span<const double> values);

}  // namespace hvi
