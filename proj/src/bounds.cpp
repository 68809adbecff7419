#include "hvi/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace hvi {


PathSpec BoundSpec::path() const {
  switch (kind) {
    case BoundKind::Hbo: return PathSpec::holder(parameter);
    case BoundKind::PerturbedHbo: return PathSpec::perturbed(parameter);
    case BoundKind::Wlbo:
    case BoundKind::Wubo: return PathSpec::wasserstein();
    default: return PathSpec::geometric();
  }
}

PartitionSchedule BoundSpec::effective_schedule() const {
  if (schedule) return *schedule;
  if (kind == BoundKind::Tvo) return PartitionSchedule::log(kDefaultTvoIntervals);
  return PartitionSchedule::uniform(kDefaultHboIntervals);
}

std::string BoundSpec::id() const {
  switch (kind) {
    case BoundKind::Rvi:
    case BoundKind::Hbo:
    case BoundKind::PerturbedHbo: return to_string(kind) + "[" + format_shortest(parameter) + "]";
    default: return to_string(kind);
  }
}

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::Elbo: return "elbo";
    case BoundKind::IwElbo: return "iw_elbo";
    case BoundKind::Rvi: return "rvi";
    case BoundKind::Eubo: return "eubo";
    case BoundKind::Wlbo: return "wlbo";
    case BoundKind::Wubo: return "wubo";
    case BoundKind::Tvo: return "tvo";
    case BoundKind::Hbo: return "hbo";
    case BoundKind::PerturbedHbo: return "perturbed_hbo";
  }
  return "elbo";
}

BoundKind parse_bound_kind(const std::string& name) {
  for (BoundKind k : {BoundKind::Elbo, BoundKind::IwElbo, BoundKind::Rvi, BoundKind::Eubo, BoundKind::Wlbo,
                      BoundKind::Wubo, BoundKind::Tvo, BoundKind::Hbo, BoundKind::PerturbedHbo})
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown bound '" + name + "'");
}

double evaluate_bound(const ImportanceBatch& batch, const BoundSpec& spec) {
  switch (spec.kind) {
    case BoundKind::Elbo: return elbo(batch);
    case BoundKind::IwElbo: return iw_elbo(batch);
    case BoundKind::Rvi: return rvi(batch, spec.parameter);
    case BoundKind::Eubo: return eubo(batch);
    case BoundKind::Wlbo: return wasserstein_bounds(batch).wlbo;
    case BoundKind::Wubo: return wasserstein_bounds(batch).wubo;
    case BoundKind::Tvo:
    case BoundKind::Hbo:
    case BoundKind::PerturbedHbo:
      return thermodynamic_integral(batch, spec.path(), spec.effective_schedule(), spec.rule).value;
  }
  throw std::logic_error("unhandled bound kind");
}

double BoundReport::at(const std::string& id) const {
  for (const auto& [name, v] : values)
    if (name == id) return v;
  throw std::out_of_range("bound report has no column '" + id + "'");
}

BoundReport compute_bounds(const ImportanceBatch& batch, const std::vector<BoundSpec>& specs,
                           const std::string& model_id) {
  BoundReport report;
  report.samples = batch.size();
  report.seed = batch.seed;
  report.model = model_id;
  for (const auto& spec : specs) {
    const double v = evaluate_bound(batch, spec);
    if (!std::isfinite(v)) throw NumericalError("bound " + spec.id() + " is not finite");
    report.values.emplace_back(spec.id(), v);
  }
  return report;
}

}  // namespace hvi
