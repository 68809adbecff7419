#include "hvi/serialization.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace hvi {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

// ---------------------------------------------------------------------------
// JsonObject

JsonObject::JsonObject(const Json& value, std::string path, std::initializer_list<std::string_view> allowed)
    : value_(&value), path_(std::move(path)) {
  if (!value.is_object()) throw std::invalid_argument(path_ + ": expected an object");
  for (const auto& item : value.items()) {
    const bool known = std::find(allowed.begin(), allowed.end(), std::string_view(item.key())) != allowed.end();
    if (!known) throw std::invalid_argument(this->path(item.key()) + ": unknown key");
  }
}

bool JsonObject::has(std::string_view key) const { return value_->contains(key); }

const Json& JsonObject::at(std::string_view key) const {
  if (!has(key)) throw std::invalid_argument(path(key) + ": missing required key");
  return value_->at(std::string(key));
}

std::string JsonObject::path(std::string_view key) const {
  return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
}

double JsonObject::number(std::string_view key) const {
  const auto& v = at(key);
  if (!v.is_number()) throw std::invalid_argument(path(key) + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw std::invalid_argument(path(key) + ": must be finite");
  return x;
}

double JsonObject::number(std::string_view key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

std::uint64_t JsonObject::unsigned_integer(std::string_view key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const auto& v = at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  throw std::invalid_argument(path(key) + ": expected a non-negative integer");
}

std::string JsonObject::string(std::string_view key, const std::string& fallback) const {
  if (!has(key)) return fallback;
  const auto& v = at(key);
  if (!v.is_string()) throw std::invalid_argument(path(key) + ": expected a string");
  return v.get<std::string>();
}

bool JsonObject::boolean(std::string_view key, bool fallback) const {
  if (!has(key)) return fallback;
  const auto& v = at(key);
  if (!v.is_boolean()) throw std::invalid_argument(path(key) + ": expected true or false");
  return v.get<bool>();
}

std::vector<double> JsonObject::numbers(std::string_view key, const std::vector<double>& fallback) const {
  if (!has(key)) return fallback;
  const auto& v = at(key);
  if (!v.is_array()) throw std::invalid_argument(path(key) + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw std::invalid_argument(path(key) + "[" + std::to_string(i) + "]: expected a number");
    out.push_back(v[i].get<double>());
    if (!std::isfinite(out.back()))
      throw std::invalid_argument(path(key) + "[" + std::to_string(i) + "]: must be finite");
  }
  return out;
}

Vector JsonObject::vector(std::string_view key, const Vector& fallback) const {
  if (!has(key)) return fallback;
  const auto values = numbers(key, {});
  if (values.size() != static_cast<std::size_t>(fallback.size()))
    throw std::invalid_argument(path(key) + ": expected " + std::to_string(fallback.size()) + " numbers");
  return Eigen::Map<const Vector>(values.data(), fallback.size());
}

// ---------------------------------------------------------------------------
// Paths, schedules, bounds

Json to_json(const PathSpec& spec) {
  switch (spec.kind()) {
    case PathKind::Geometric: return {{"kind", "geometric"}};
    case PathKind::Wasserstein: return {{"kind", "wasserstein"}};
    case PathKind::Holder: return {{"kind", "holder"}, {"alpha", spec.alpha()}};
    case PathKind::Perturbed: return {{"kind", "perturbed"}, {"delta", spec.delta()}};
  }
  return {};
}

PathSpec path_from_json(const Json& value, const std::string& path) {
  JsonObject obj(value, path, {"kind", "alpha", "delta"});
  const std::string kind = obj.string("kind", "geometric");
  auto reject = [&](std::string_view key) {
    if (obj.has(key)) throw std::invalid_argument(obj.path(key) + ": not used by path kind '" + kind + "'");
  };
  if (kind == "geometric" || kind == "wasserstein") {
    reject("alpha");
    reject("delta");
    return kind == "geometric" ? PathSpec::geometric() : PathSpec::wasserstein();
  }
  if (kind == "holder") {
    reject("delta");
    return PathSpec::holder(obj.number("alpha"));
  }
  if (kind == "perturbed") {
    reject("alpha");
    return PathSpec::perturbed(obj.number("delta"));
  }
  throw std::invalid_argument(obj.path("kind") + ": unknown path kind '" + kind +
                              "' (expected geometric, holder, wasserstein or perturbed)");
}

Json to_json(const PartitionSchedule& schedule) {
  switch (schedule.kind()) {
    case PartitionKind::Uniform: return {{"kind", "uniform"}, {"intervals", schedule.intervals()}};
    case PartitionKind::Log:
      return {{"kind", "log"}, {"intervals", schedule.intervals()}, {"first_beta", schedule.betas()[1]}};
    case PartitionKind::Explicit: return {{"points", schedule.betas()}};
  }
  return {};
}

PartitionSchedule schedule_from_json(const Json& value, const std::string& path) {
  JsonObject obj(value, path, {"kind", "intervals", "first_beta", "points"});
  try {
    if (obj.has("points")) {
      if (obj.has("kind") || obj.has("intervals") || obj.has("first_beta"))
        throw std::invalid_argument("'points' cannot be combined with kind/intervals/first_beta");
      return PartitionSchedule::from_points(obj.numbers("points", {}));
    }
    const std::string kind = obj.string("kind", "uniform");
    const auto k = static_cast<std::size_t>(obj.unsigned_integer("intervals", BoundSpec::kDefaultHboIntervals));
    if (kind == "uniform") {
      if (obj.has("first_beta")) throw std::invalid_argument("first_beta only applies to log schedules");
      return PartitionSchedule::uniform(k);
    }
    if (kind == "log") {
      return obj.has("first_beta") ? PartitionSchedule::log(k, obj.number("first_beta"))
                                   : PartitionSchedule::log(k);
    }
    throw std::invalid_argument("unknown schedule kind '" + kind + "' (expected uniform or log)");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    if (msg.rfind(path, 0) == 0) throw;
    throw std::invalid_argument(path + ": " + msg);
  }
}

Json to_json(const BoundSpec& bound) {
  Json out{{"kind", to_string(bound.kind)}};
  if (bound.kind == BoundKind::Rvi || bound.kind == BoundKind::Hbo) out["alpha"] = bound.parameter;
  if (bound.kind == BoundKind::PerturbedHbo) out["delta"] = bound.parameter;
  if (bound.is_thermodynamic()) {
    out["schedule"] = to_json(bound.effective_schedule());
    out["rule"] = to_string(bound.rule);
  }
  return out;
}

BoundSpec bound_from_json(const Json& value, const std::string& path) {
  BoundSpec spec;
  if (value.is_string()) {
    try {
      spec.kind = parse_bound_kind(value.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(path + ": " + e.what());
    }
    if (spec.kind == BoundKind::Rvi || spec.kind == BoundKind::Hbo || spec.kind == BoundKind::PerturbedHbo)
      throw std::invalid_argument(path + ": bound '" + to_string(spec.kind) + "' needs an object with its parameter");
    return spec;
  }
  JsonObject obj(value, path, {"kind", "alpha", "delta", "schedule", "rule"});
  try {
    spec.kind = parse_bound_kind(obj.string("kind", ""));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(obj.path("kind") + ": " + e.what());
  }
  const bool takes_alpha = spec.kind == BoundKind::Rvi || spec.kind == BoundKind::Hbo;
  const bool takes_delta = spec.kind == BoundKind::PerturbedHbo;
  if (obj.has("alpha") && !takes_alpha) throw std::invalid_argument(obj.path("alpha") + ": not used by this bound");
  if (obj.has("delta") && !takes_delta) throw std::invalid_argument(obj.path("delta") + ": not used by this bound");
  if (takes_alpha) spec.parameter = obj.number("alpha");
  if (takes_delta) spec.parameter = obj.number("delta");
  if (spec.kind == BoundKind::Rvi && !(spec.parameter > 0.0))
    throw std::invalid_argument(obj.path("alpha") + ": rvi requires alpha > 0");
  if (!spec.is_thermodynamic() && (obj.has("schedule") || obj.has("rule")))
    throw std::invalid_argument(path + ": schedule and rule only apply to tvo, hbo and perturbed_hbo");
  if (obj.has("schedule")) spec.schedule = schedule_from_json(obj.at("schedule"), obj.path("schedule"));
  if (obj.has("rule")) {
    try {
      spec.rule = parse_integration_rule(obj.string("rule", "left"));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(obj.path("rule") + ": " + e.what());
    }
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Results

Json to_json(const LocalEvidenceEstimate& estimate) {
  return {{"value", estimate.value},
          {"std_err", estimate.std_err},
          {"ess", estimate.ess},
          {"degenerate", estimate.degenerate}};
}

Json to_json(const CurveSummary& summary) {
  Json points = Json::array();
  for (const auto& p : summary.points) {
    Json row = to_json(p.estimate);
    row["beta"] = p.beta;
    points.push_back(row);
  }
  return {{"alpha", summary.alpha},
          {"range", summary.range},
          {"slope", summary.slope},
          {"slope_std_err", summary.slope_std_err},
          {"points", points}};
}

Json to_json(const AlphaSearchResult& result) {
  Json table = Json::array();
  for (const auto& row : result.table) table.push_back(to_json(row));
  return {{"alpha_hat", result.alpha_hat},
          {"method", result.method},
          {"evaluations", result.evaluations},
          {"iterations", result.iterations},
          {"statistically_flat", result.statistically_flat},
          {"exhausted", result.exhausted},
          {"final", to_json(result.final)},
          {"table", table}};
}

// ---------------------------------------------------------------------------
// CSV

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size())
    throw std::invalid_argument("csv: row has " + std::to_string(cells.size()) + " cells, header has " +
                                std::to_string(header_.size()));
  rows_.push_back(std::move(cells));
}

void CsvTable::add_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  add_row(std::move(cells));
}

std::string CsvTable::str() const {
  auto join = [](const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) line += ',';
      line += cells[i];
    }
    line += '\n';
    return line;
  };
  std::string out = join(header_);
  for (const auto& row : rows_) out += join(row);
  return out;
}

CsvTable bounds_table(const std::vector<BoundReport>& reports) {
  if (reports.empty()) throw std::invalid_argument("csv: no bound reports");
  std::vector<std::string> header{"seed", "samples"};
  for (const auto& [id, value] : reports.front().values) header.push_back(id);
  CsvTable table(header);
  for (const auto& r : reports) {
    if (r.values.size() + 2 != header.size()) throw std::invalid_argument("csv: bound reports differ in columns");
    std::vector<std::string> cells{std::to_string(r.seed), std::to_string(r.samples)};
    for (const auto& [id, value] : r.values) cells.push_back(format_double(value));
    table.add_row(std::move(cells));
  }
  return table;
}

CsvTable trace_table(const TrainingTrace& trace, const std::vector<std::optional<double>>* mmd_by_row) {
  std::vector<std::string> header{"step", "objective"};
  header.insert(header.end(), trace.parameter_names.begin(), trace.parameter_names.end());
  if (mmd_by_row) {
    if (mmd_by_row->size() != trace.rows.size()) throw std::invalid_argument("csv: mmd column length mismatch");
    header.push_back("mmd");
  }
  CsvTable table(header);
  for (std::size_t i = 0; i < trace.rows.size(); ++i) {
    const auto& row = trace.rows[i];
    std::vector<std::string> cells{std::to_string(row.step), format_double(row.objective)};
    for (Eigen::Index k = 0; k < row.lambda.size(); ++k) cells.push_back(format_double(row.lambda[k]));
    if (mmd_by_row) cells.push_back((*mmd_by_row)[i] ? format_double(*(*mmd_by_row)[i]) : "");
    table.add_row(std::move(cells));
  }
  return table;
}

CsvTable profile_table(const CurveProfile& profile) {
  CsvTable table({"beta", "mean", "variance", "mean_ess"});
  for (std::size_t k = 0; k < profile.betas.size(); ++k)
    table.add_row(std::vector<double>{profile.betas[k], profile.mean[k], profile.variance[k], profile.mean_ess[k]});
  return table;
}

CsvTable approx_error_table(const ApproxErrorCurve& curve) {
  CsvTable table({"x", "log_marginal", "bound"});
  for (std::size_t i = 0; i < curve.x.size(); ++i)
    table.add_row(std::vector<double>{curve.x[i], curve.log_marginal[i], curve.bound[i]});
  return table;
}

}  // namespace hvi
