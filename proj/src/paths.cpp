#include "hvi/paths.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace hvi {

PathSpec PathSpec::holder(double alpha) {
  if (!std::isfinite(alpha)) throw std::invalid_argument("holder path: alpha must be finite");
  return PathSpec(PathKind::Holder, alpha);
}

PathSpec PathSpec::perturbed(double delta) {
  if (!std::isfinite(delta)) throw std::invalid_argument("perturbed path: delta must be finite");
  if (std::abs(delta) > kPerturbedSoftLimit)
    std::cerr << "warning: perturbed path with |delta| = " << std::abs(delta) << " > " << kPerturbedSoftLimit
              << "; the first-order expansion may be inaccurate\n";
  return PathSpec(PathKind::Perturbed, delta);
}

std::string PathSpec::label() const {
  switch (kind_) {
    case PathKind::Geometric: return "geometric";
    case PathKind::Wasserstein: return "wasserstein";
    case PathKind::Holder: return "holder(" + format_shortest(parameter_) + ")";
    case PathKind::Perturbed: return "perturbed(" + format_shortest(parameter_) + ")";
  }
  return {};
}

void check_beta(double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must lie in [0, 1]");
}

namespace {
// log |e^x - 1| without overflow for large x.
double log_abs_expm1(double x) {
  if (x > 0.0) return x + std::log(-std::expm1(-x));
  return std::log(-std::expm1(x));
}

SignedLog signed_log(double g) {
  if (g == 0.0) return {0.0, kNegInf};
  return {g > 0.0 ? 1.0 : -1.0, std::log(std::abs(g))};
}
}  // namespace

PathPoint::PathPoint(const PathSpec& spec, double beta)
    : spec_(spec), beta_(beta), log_beta_(std::log(beta)), log_complement_(std::log1p(-beta)) {
  check_beta(beta);
}

double PathPoint::log_density(double l0, double l1) const {
  if (beta_ == 0.0) return l0;
  if (beta_ == 1.0) return l1;
  if (spec_.is_geometric()) return beta_ * l1 + (1.0 - beta_) * l0;
  if (spec_.kind() == PathKind::Perturbed) {
    const double f = l1 - l0;
    return beta_ * l1 + (1.0 - beta_) * l0 + 0.5 * spec_.delta() * beta_ * (1.0 - beta_) * f * f;
  }
  const double a = spec_.alpha();
  return log_add_exp(log_beta_ + a * l1, log_complement_ + a * l0) / a;
}

SignedLog PathPoint::log_abs_integrand(double l0, double l1, double log_density) const {
  const double f = l1 - l0;
  if (spec_.is_geometric()) return signed_log(f);
  if (spec_.kind() == PathKind::Perturbed) return signed_log(f + (0.5 - beta_) * f * f * spec_.delta());
  if (f == 0.0) return {0.0, kNegInf};
  // (e^{a L1} - e^{a L0}) / (a pi~^a) with the larger endpoint factored out;
  // the sign follows f for either sign of a.
  const double a = spec_.alpha();
  const double log_abs =
      a * (std::max(l0, l1) - log_density) + log_abs_expm1(-a * std::abs(f)) - std::log(std::abs(a));
  return {f > 0.0 ? 1.0 : -1.0, log_abs};
}

double PathPoint::integrand(double l0, double l1) const {
  if (spec_.is_geometric()) return l1 - l0;
  const auto g = log_abs_integrand(l0, l1);
  return g.sign == 0.0 ? 0.0 : g.sign * std::exp(g.log_abs);
}

double log_path_density(const PathSpec& spec, double beta, double l0, double l1) {
  return PathPoint(spec, beta).log_density(l0, l1);
}

double path_integrand(const PathSpec& spec, double beta, double l0, double l1) {
  return PathPoint(spec, beta).integrand(l0, l1);
}

SignedLog log_abs_path_integrand(const PathSpec& spec, double beta, double l0, double l1) {
  return PathPoint(spec, beta).log_abs_integrand(l0, l1);
}

double log_path_density(const PathSpec& spec, const LatentModel& model, double beta, const Vector& z) {
  return log_path_density(spec, beta, model.log_proposal(z), model.log_target(z));
}

double path_integrand(const PathSpec& spec, const LatentModel& model, double beta, const Vector& z) {
  return path_integrand(spec, beta, model.log_proposal(z), model.log_target(z));
}

PathSensitivity path_sensitivity(const PathSpec& spec, double beta, double l0, double l1) {
  check_beta(beta);
  const double f = l1 - l0;
  if (spec.is_geometric()) return {1.0 - beta, beta, -1.0, 1.0, {1.0, 0.0}};
  if (spec.kind() == PathKind::Perturbed) {
    const double d = spec.delta();
    const double shift = d * beta * (1.0 - beta) * f;
    const double slope = 1.0 + (1.0 - 2.0 * beta) * d * f;
    return {(1.0 - beta) - shift, beta + shift, -slope, slope, signed_log(slope)};
  }
  const double a = spec.alpha();
  const double log_mix = log_path_density(spec, beta, l0, l1);
  // beta e^{a L1} / pi~^a and its complement both lie in [0, 1].
  const double rel_target = beta == 0.0 ? 0.0 : std::exp(std::log(beta) + a * (l1 - log_mix));
  const double rel_proposal = beta == 1.0 ? 0.0 : std::exp(std::log1p(-beta) + a * (l0 - log_mix));
  const double log_cross = a * (l0 + l1 - 2.0 * log_mix);
  const double cross = std::exp(log_cross);
  return {rel_proposal, rel_target, -cross, cross, {1.0, log_cross}};
}

}  // namespace hvi
