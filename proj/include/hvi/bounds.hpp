#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hvi/estimators.hpp"

namespace hvi {

enum class BoundKind { Elbo, IwElbo, Rvi, Eubo, Wlbo, Wubo, Tvo, Hbo, PerturbedHbo };

/// One requested bound. `parameter` is alpha for Rvi/Hbo and delta for
/// PerturbedHbo; schedule and rule only matter for thermodynamic bounds.
struct BoundSpec {
  static constexpr std::size_t kDefaultTvoIntervals = 50;
  static constexpr std::size_t kDefaultHboIntervals = 100;

  BoundKind kind = BoundKind::Elbo;
  double parameter = 0.0;
  std::optional<PartitionSchedule> schedule;
  IntegrationRule rule = IntegrationRule::Left;

  static BoundSpec elbo() { return {BoundKind::Elbo, 0.0, std::nullopt}; }
  static BoundSpec iw_elbo() { return {BoundKind::IwElbo, 0.0, std::nullopt}; }
  static BoundSpec rvi(double alpha) { return {BoundKind::Rvi, alpha, std::nullopt}; }
  static BoundSpec eubo() { return {BoundKind::Eubo, 0.0, std::nullopt}; }
  static BoundSpec wlbo() { return {BoundKind::Wlbo, 0.0, std::nullopt}; }
  static BoundSpec wubo() { return {BoundKind::Wubo, 0.0, std::nullopt}; }
  static BoundSpec tvo(std::optional<PartitionSchedule> schedule = std::nullopt,
                       IntegrationRule rule = IntegrationRule::Left) {
    return {BoundKind::Tvo, 0.0, std::move(schedule), rule};
  }
  static BoundSpec hbo(double alpha, std::optional<PartitionSchedule> schedule = std::nullopt,
                       IntegrationRule rule = IntegrationRule::Left) {
    return {BoundKind::Hbo, alpha, std::move(schedule), rule};
  }
  static BoundSpec perturbed_hbo(double delta, std::optional<PartitionSchedule> schedule = std::nullopt,
                                 IntegrationRule rule = IntegrationRule::Left) {
    return {BoundKind::PerturbedHbo, delta, std::move(schedule), rule};
  }

  bool is_thermodynamic() const {
    return kind == BoundKind::Tvo || kind == BoundKind::Hbo || kind == BoundKind::PerturbedHbo;
  }
  /// Path of a thermodynamic bound (geometric for everything else).
  PathSpec path() const;
  /// Explicit schedule, or log(K=50) for TVO and uniform(K=100) for HBO.
  PartitionSchedule effective_schedule() const;
  /// Column id, e.g. "elbo", "rvi[0.5]", "hbo[0.8]".
  std::string id() const;
};

std::string to_string(BoundKind kind);
BoundKind parse_bound_kind(const std::string& name);

double evaluate_bound(const ImportanceBatch& batch, const BoundSpec& spec);

/// Named bound values from one importance batch, in request order.
struct BoundReport {
  std::vector<std::pair<std::string, double>> values;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::string model;

  double at(const std::string& id) const;
};

BoundReport compute_bounds(const ImportanceBatch& batch, const std::vector<BoundSpec>& specs,
                           const std::string& model_id = {});

}  // namespace hvi
