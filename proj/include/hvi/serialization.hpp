#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hvi/bounds.hpp"
#include "hvi/diagnostics.hpp"
#include "hvi/gradients.hpp"
#include "hvi/tuning.hpp"

namespace hvi {

using Json = nlohmann::json;

/// printf %.17g: 17 significant digits, '.' as separator.
std::string format_double(double value);

/// Read-only view of a JSON object that rejects unknown keys and reports
/// errors as std::invalid_argument prefixed with the dotted field path.
class JsonObject {
 public:
  JsonObject(const Json& value, std::string path, std::initializer_list<std::string_view> allowed);

  bool has(std::string_view key) const;
  const Json& at(std::string_view key) const;
  std::string path(std::string_view key) const;
  const std::string& path() const { return path_; }

  double number(std::string_view key) const;
  double number(std::string_view key, double fallback) const;
  std::uint64_t unsigned_integer(std::string_view key, std::uint64_t fallback) const;
  std::string string(std::string_view key, const std::string& fallback) const;
  bool boolean(std::string_view key, bool fallback) const;
  std::vector<double> numbers(std::string_view key, const std::vector<double>& fallback) const;
  /// Fixed-length numeric array; the length is taken from the fallback.
  Vector vector(std::string_view key, const Vector& fallback) const;

 private:
  const Json* value_;
  std::string path_;
};

Json to_json(const PathSpec& spec);
/// {"kind": "geometric" | "holder" | "wasserstein" | "perturbed", "alpha" | "delta"}.
PathSpec path_from_json(const Json& value, const std::string& path);

Json to_json(const PartitionSchedule& schedule);
/// {"kind": "uniform" | "log", "intervals": K} or {"points": [...]}.
PartitionSchedule schedule_from_json(const Json& value, const std::string& path);

Json to_json(const BoundSpec& bound);
/// A bare name ("elbo") or {"kind", "alpha" | "delta", "schedule", "rule"}.
BoundSpec bound_from_json(const Json& value, const std::string& path);

Json to_json(const LocalEvidenceEstimate& estimate);
Json to_json(const CurveSummary& summary);
Json to_json(const AlphaSearchResult& result);

/// Comma-separated table with a header row and one record per line.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(std::vector<std::string> cells);
  void add_row(const std::vector<double>& values);
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// One row per report: seed, samples, then one column per bound id.
CsvTable bounds_table(const std::vector<BoundReport>& reports);
/// step, objective, one column per parameter, and an optional mmd column
/// (empty cells on steps without a reference evaluation).
CsvTable trace_table(const TrainingTrace& trace,
                     const std::vector<std::optional<double>>* mmd_by_row = nullptr);
/// One row per beta: beta, mean, variance, mean_ess.
CsvTable profile_table(const CurveProfile& profile);
/// One row per observation: x, log_marginal, bound.
CsvTable approx_error_table(const ApproxErrorCurve& curve);

}  // namespace hvi
