#include "hvi/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hvi {

ImportanceBatch draw_batch(const LatentModel& model, const Vector& lambda, std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("draw_batch: need at least one sample");
  Rng rng = make_rng(seed);
  ImportanceBatch batch;
  batch.seed = seed;
  batch.samples.reserve(samples);
  batch.log_proposal.reserve(samples);
  batch.log_target.reserve(samples);
  batch.log_ratio.reserve(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    Vector z = model.sample_proposal(rng, lambda);
    const double l0 = model.log_proposal(z, lambda);
    const double l1 = model.log_target(z, lambda);
    if (!std::isfinite(l0) || !std::isfinite(l1)) throw NumericalError("draw_batch: non-finite log-density at a sample");
    batch.samples.push_back(std::move(z));
    batch.log_proposal.push_back(l0);
    batch.log_target.push_back(l1);
    batch.log_ratio.push_back(l1 - l0);
  }
  return batch;
}

ImportanceBatch draw_batch(const LatentModel& model, std::size_t samples, std::uint64_t seed) {
  return draw_batch(model, model.parameters().values(), samples, seed);
}

// ---------------------------------------------------------------------------
// Partition schedules

PartitionSchedule::PartitionSchedule(std::vector<double> betas, PartitionKind kind)
    : betas_(std::move(betas)), kind_(kind) {
  if (betas_.size() < 2) throw std::invalid_argument("partition needs at least two points");
  if (betas_.front() != 0.0 || betas_.back() != 1.0)
    throw std::invalid_argument("partition must start at 0 and end at 1");
  for (std::size_t k = 1; k < betas_.size(); ++k)
    if (!(betas_[k] > betas_[k - 1])) throw std::invalid_argument("partition must be strictly increasing");
}

PartitionSchedule PartitionSchedule::uniform(std::size_t intervals) {
  if (intervals == 0) throw std::invalid_argument("uniform partition needs K >= 1");
  std::vector<double> b(intervals + 1);
  for (std::size_t k = 0; k <= intervals; ++k) b[k] = static_cast<double>(k) / static_cast<double>(intervals);
  b.back() = 1.0;
  return PartitionSchedule(std::move(b), PartitionKind::Uniform);
}

PartitionSchedule PartitionSchedule::log(std::size_t intervals, double first_beta) {
  if (intervals < 2) throw std::invalid_argument("log partition needs K >= 2");
  if (!(first_beta > 0.0 && first_beta < 1.0)) throw std::invalid_argument("log partition: beta_1 must be in (0, 1)");
  std::vector<double> b(intervals + 1);
  b[0] = 0.0;
  const double lo = std::log10(first_beta);
  for (std::size_t k = 1; k <= intervals; ++k) {
    const double t = static_cast<double>(k - 1) / static_cast<double>(intervals - 1);
    b[k] = std::pow(10.0, lo * (1.0 - t));
  }
  b[1] = first_beta;
  b.back() = 1.0;
  return PartitionSchedule(std::move(b), PartitionKind::Log);
}

PartitionSchedule PartitionSchedule::from_points(std::vector<double> betas) {
  return PartitionSchedule(std::move(betas), PartitionKind::Explicit);
}

std::string PartitionSchedule::label() const {
  std::ostringstream os;
  switch (kind_) {
    case PartitionKind::Uniform: os << "uniform"; break;
    case PartitionKind::Log: os << "log"; break;
    case PartitionKind::Explicit: os << "explicit"; break;
  }
  os << "(K=" << intervals() << ")";
  return os.str();
}

std::string to_string(IntegrationRule rule) {
  switch (rule) {
    case IntegrationRule::Left: return "left";
    case IntegrationRule::Right: return "right";
    case IntegrationRule::Trapezoid: return "trapezoid";
  }
  return "left";
}

IntegrationRule parse_integration_rule(const std::string& name) {
  if (name == "left") return IntegrationRule::Left;
  if (name == "right") return IntegrationRule::Right;
  if (name == "trapezoid" || name == "trapz") return IntegrationRule::Trapezoid;
  throw std::invalid_argument("unknown integration rule '" + name + "' (expected left, right or trapezoid)");
}

// ---------------------------------------------------------------------------
// Importance-weighted local evidence

std::vector<double> path_log_weights(const ImportanceBatch& batch, const PathSpec& spec, double beta) {
  const PathPoint path(spec, beta);
  std::vector<double> lw(batch.size());
  // Every supported path is homogeneous in (pi0, pi1), so pi~_beta / q depends
  // on f alone.
  for (std::size_t i = 0; i < lw.size(); ++i) lw[i] = path.log_density(0.0, batch.log_ratio[i]);
  return lw;
}

std::vector<double> path_integrands(const ImportanceBatch& batch, const PathSpec& spec, double beta) {
  const PathPoint path(spec, beta);
  std::vector<double> g(batch.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = path.integrand(0.0, batch.log_ratio[i]);
  return g;
}

WeightedIntegrands weighted_integrands(const ImportanceBatch& batch, const PathSpec& spec, double beta) {
  if (batch.size() == 0) throw std::invalid_argument("local_evidence: empty batch");
  const PathPoint path(spec, beta);
  const auto lw = path_log_weights(batch, spec, beta);
  const double hi = *std::max_element(lw.begin(), lw.end());
  if (!std::isfinite(hi)) throw NumericalError("local_evidence: non-finite importance weights");
  // Relative weights exp(lw - hi) keep equal weights exact, so the estimate
  // reproduces a constant integrand to rounding.
  WeightedIntegrands out{std::vector<double>(lw.size()), std::vector<double>(lw.size())};
  for (std::size_t i = 0; i < lw.size(); ++i) out.weights[i] = std::exp(lw[i] - hi);
  const double total = compensated_sum(out.weights);
  const double log_total = std::log(total);
  for (std::size_t i = 0; i < lw.size(); ++i) {
    out.weights[i] /= total;
    const auto g = path.log_abs_integrand(0.0, batch.log_ratio[i], lw[i]);
    if (g.sign == 0.0) continue;
    const double t = lw[i] - hi + g.log_abs;
    out.weighted[i] = t < 700.0 ? g.sign * std::exp(t) / total : g.sign * std::exp(t - log_total);
  }
  return out;
}

LocalEvidenceEstimate local_evidence(const ImportanceBatch& batch, const PathSpec& spec, double beta) {
  const auto [w, wg] = weighted_integrands(batch, spec, beta);
  LocalEvidenceEstimate est;
  est.value = compensated_sum(wg);
  if (!std::isfinite(est.value)) throw NumericalError("local_evidence: non-finite estimate");
  est.ess = normalized_ess(path_log_weights(batch, spec, beta));
  if (batch.size() == 1) {
    est.degenerate = true;
    est.std_err = 0.0;
    return est;
  }
  double var = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double d = wg[i] - w[i] * est.value;
    var += d * d;
  }
  est.std_err = std::sqrt(var);
  return est;
}

double elbo(const ImportanceBatch& batch) {
  if (batch.size() == 0) throw std::invalid_argument("elbo: empty batch");
  return mean(batch.log_ratio);
}

double iw_elbo(const ImportanceBatch& batch) {
  if (batch.size() == 0) throw std::invalid_argument("iw_elbo: empty batch");
  return log_mean_exp(batch.log_ratio);
}

double rvi(const ImportanceBatch& batch, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("rvi: alpha must be positive (use elbo for alpha = 0)");
  if (batch.size() == 0) throw std::invalid_argument("rvi: empty batch");
  std::vector<double> scaled(batch.log_ratio);
  for (double& v : scaled) v *= alpha;
  return log_mean_exp(scaled) / alpha;
}

double eubo(const ImportanceBatch& batch) { return local_evidence(batch, PathSpec::geometric(), 1.0).value; }

WassersteinBounds wasserstein_bounds(const ImportanceBatch& batch) {
  return {local_evidence(batch, PathSpec::wasserstein(), 1.0).value,
          local_evidence(batch, PathSpec::wasserstein(), 0.0).value};
}

// ---------------------------------------------------------------------------
// Riemann sums

namespace {
void check_riemann_points(const std::vector<double>& betas, std::size_t values) {
  if (betas.size() < 2) throw std::invalid_argument("riemann_integrate: need at least two points");
  if (betas.size() != values) throw std::invalid_argument("riemann_integrate: beta/value length mismatch");
  if (betas.front() != 0.0 || betas.back() != 1.0)
    throw std::invalid_argument("riemann_integrate: betas must start at 0 and end at 1");
  for (std::size_t k = 1; k < betas.size(); ++k)
    if (!(betas[k] > betas[k - 1])) throw std::invalid_argument("riemann_integrate: betas must be strictly increasing");
}
}  // namespace

double riemann_integrate(const std::vector<double>& betas, const std::vector<double>& values, IntegrationRule rule) {
  check_riemann_points(betas, values.size());
  double left = 0.0, right = 0.0;
  for (std::size_t k = 0; k + 1 < betas.size(); ++k) {
    const double width = betas[k + 1] - betas[k];
    left += width * values[k];
    right += width * values[k + 1];
  }
  switch (rule) {
    case IntegrationRule::Left: return left;
    case IntegrationRule::Right: return right;
    case IntegrationRule::Trapezoid: return 0.5 * (left + right);
  }
  return left;
}

double riemann_integrate(const std::vector<std::pair<double, double>>& points, IntegrationRule rule) {
  std::vector<double> b, v;
  for (const auto& [beta, value] : points) {
    b.push_back(beta);
    v.push_back(value);
  }
  return riemann_integrate(b, v, rule);
}

std::vector<double> riemann_weights(const std::vector<double>& betas, IntegrationRule rule) {
  check_riemann_points(betas, betas.size());
  std::vector<double> w(betas.size(), 0.0);
  for (std::size_t k = 0; k + 1 < betas.size(); ++k) {
    const double width = betas[k + 1] - betas[k];
    switch (rule) {
      case IntegrationRule::Left: w[k] += width; break;
      case IntegrationRule::Right: w[k + 1] += width; break;
      case IntegrationRule::Trapezoid:
        w[k] += 0.5 * width;
        w[k + 1] += 0.5 * width;
        break;
    }
  }
  return w;
}

ThermodynamicEstimate thermodynamic_integral(const ImportanceBatch& batch, const PathSpec& spec,
                                             const PartitionSchedule& schedule, IntegrationRule rule) {
  ThermodynamicEstimate out;
  out.betas = schedule.betas();
  std::vector<double> values;
  values.reserve(out.betas.size());
  for (double beta : out.betas) {
    out.local.push_back(local_evidence(batch, spec, beta));
    values.push_back(out.local.back().value);
  }
  out.value = riemann_integrate(out.betas, values, rule);
  return out;
}

ThermodynamicEstimate tvo(const ImportanceBatch& batch, const PartitionSchedule& schedule, IntegrationRule rule) {
  return thermodynamic_integral(batch, PathSpec::geometric(), schedule, rule);
}

ThermodynamicEstimate hbo(const ImportanceBatch& batch, double alpha, const PartitionSchedule& schedule,
                          IntegrationRule rule) {
  return thermodynamic_integral(batch, PathSpec::holder(alpha), schedule, rule);
}

ThermodynamicEstimate perturbed_hbo(const ImportanceBatch& batch, double delta, const PartitionSchedule& schedule,
                                    IntegrationRule rule) {
  return thermodynamic_integral(batch, PathSpec::perturbed(delta), schedule, rule);
}

}  // namespace hvi
