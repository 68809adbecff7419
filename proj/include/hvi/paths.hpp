#pragma once

#include <cmath>
#include <string>

#include "hvi/models.hpp"

namespace hvi {

enum class PathKind { Geometric, Holder, Wasserstein, Perturbed };

/// Interpolation family between the proposal (beta = 0) and the target
/// (beta = 1).
///
/// - Geometric:   log pi_b = b L1 + (1 - b) L0
/// - Holder(a):   pi_b = [b pi1^a + (1 - b) pi0^a]^(1/a), the weighted power
///                mean; |a| < kGeometricCutoff is evaluated as Geometric.
/// - Wasserstein: Holder(1), the arithmetic mixture.
/// - Perturbed(d): first-order expansion of Holder(d) around d = 0.
class PathSpec {
 public:
  static constexpr double kGeometricCutoff = 1e-6;
  static constexpr double kPerturbedSoftLimit = 0.2;

  static PathSpec geometric() { return PathSpec(PathKind::Geometric, 0.0); }
  static PathSpec holder(double alpha);
  static PathSpec wasserstein() { return PathSpec(PathKind::Wasserstein, 1.0); }
  /// Warns on stderr (does not throw) when |delta| exceeds kPerturbedSoftLimit.
  static PathSpec perturbed(double delta);

  PathKind kind() const { return kind_; }
  /// Holder order: 0 for geometric, 1 for Wasserstein, delta for perturbed.
  double alpha() const { return parameter_; }
  double delta() const { return parameter_; }

  /// True when evaluation uses the geometric formulas.
  bool is_geometric() const {
    return kind_ == PathKind::Geometric || (kind_ == PathKind::Holder && std::abs(parameter_) < kGeometricCutoff);
  }
  /// True when evaluation uses the exact power-mean formulas.
  bool is_power_mean() const {
    return kind_ == PathKind::Wasserstein || (kind_ == PathKind::Holder && !is_geometric());
  }

  std::string label() const;
  bool operator==(const PathSpec&) const = default;

 private:
  PathSpec(PathKind kind, double parameter) : kind_(kind), parameter_(parameter) {}
  PathKind kind_;
  double parameter_;
};

/// log pi~_beta from the endpoint log-densities L0 = log pi~_0, L1 = log pi~_1.
/// beta in {0, 1} returns L0 / L1 exactly.
double log_path_density(const PathSpec& spec, double beta, double log_proposal, double log_target);

/// d/d beta log pi~_beta, the local-evidence integrand.
double path_integrand(const PathSpec& spec, double beta, double log_proposal, double log_target);

/// The integrand as sign * exp(log_abs). Stays finite where the integrand
/// itself overflows (far tails at beta near 1), so weighted sums can be
/// formed in log domain.
struct SignedLog {
  double sign;
  double log_abs;
};
SignedLog log_abs_path_integrand(const PathSpec& spec, double beta, double log_proposal, double log_target);

/// The path at one fixed beta, with beta-dependent constants hoisted out of
/// per-point evaluation. The free functions above delegate to it.
class PathPoint {
 public:
  PathPoint(const PathSpec& spec, double beta);

  double log_density(double log_proposal, double log_target) const;
  /// `log_density` must be log_density(log_proposal, log_target).
  SignedLog log_abs_integrand(double log_proposal, double log_target, double log_density) const;
  SignedLog log_abs_integrand(double log_proposal, double log_target) const {
    return log_abs_integrand(log_proposal, log_target, log_density(log_proposal, log_target));
  }
  double integrand(double log_proposal, double log_target) const;

 private:
  PathSpec spec_;
  double beta_;
  double log_beta_;
  double log_complement_;
};

/// Model-facing overloads evaluating the endpoints at z with the model's
/// current parameters.
double log_path_density(const PathSpec& spec, const LatentModel& model, double beta, const Vector& z);
double path_integrand(const PathSpec& spec, const LatentModel& model, double beta, const Vector& z);

/// Partial derivatives of the path quantities with respect to (L0, L1), used
/// by the gradient estimators. Every path is homogeneous, so the integrand
/// derivative is antisymmetric: d g / d L1 = -d g / d L0 = integrand_slope.
struct PathSensitivity {
  double log_density_d_log_proposal;
  double log_density_d_log_target;
  double integrand_d_log_proposal;
  double integrand_d_log_target;
  /// d g / d L1 as sign * exp(log_abs); finite where the plain value overflows.
  SignedLog integrand_slope;
};
PathSensitivity path_sensitivity(const PathSpec& spec, double beta, double log_proposal, double log_target);

void check_beta(double beta);

}  // namespace hvi
