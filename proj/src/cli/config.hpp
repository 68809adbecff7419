#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "hvi/models.hpp"
#include "hvi/serialization.hpp"

namespace hvi::cli {

/// Command-line values that take precedence over the config file.
struct Overrides {
  std::optional<std::string> model;
  std::optional<std::size_t> samples;
  std::optional<std::size_t> steps;
  std::optional<double> learning_rate;
};

/// Parses a JSON config file; an empty path yields an empty object.
Json load_config(const std::string& path);

/// Writes flag values into the config: model -> model.id, samples -> samples,
/// steps and learning_rate -> train.*.
Json apply_overrides(Json config, const Overrides& overrides);

/// {"id": ..., "params": {...}}; "params" is optional.
struct ModelConfig {
  std::string id;
  Json params = Json::object();

  std::unique_ptr<LatentModel> build() const;
  /// Same model with its observation (x_obs or y_obs) replaced by x.
  std::unique_ptr<LatentModel> build_at(double x) const;
  Json to_json() const;
};

ModelConfig model_from_json(const Json& value, const std::string& path);

}  // namespace hvi::cli
