#include "cli/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hvi/model_registry.hpp"

namespace hvi::cli {

Json load_config(const std::string& path) {
  if (path.empty()) return Json::object();
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  Json j;
  try {
    j = Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument("config: " + path + ": " + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: top level must be a JSON object");
  return j;
}

Json apply_overrides(Json config, const Overrides& overrides) {
  if (overrides.model) {
    if (!config.contains("model") || !config["model"].is_object()) config["model"] = Json::object();
    // Parameters of a different model would be rejected, so they go too.
    if (config["model"].value("id", std::string()) != *overrides.model) config["model"].erase("params");
    config["model"]["id"] = *overrides.model;
  }
  if (overrides.samples) config["samples"] = *overrides.samples;
  if (overrides.steps || overrides.learning_rate) {
    if (!config.contains("train") || !config["train"].is_object()) config["train"] = Json::object();
    if (overrides.steps) config["train"]["steps"] = *overrides.steps;
    if (overrides.learning_rate) config["train"]["learning_rate"] = *overrides.learning_rate;
  }
  return config;
}

std::unique_ptr<LatentModel> ModelConfig::build() const { return make_model(id, params); }

std::unique_ptr<LatentModel> ModelConfig::build_at(double x) const {
  Json p = params;
  if (id == "sin_toy" || id == "conjugate_gaussian") {
    p["x_obs"] = x;
  } else if (id == "ring") {
    p["y_obs"] = x;
  } else {
    throw std::invalid_argument("model.id: " + id + " has no scalar observation to sweep");
  }
  return make_model(id, p);
}

Json ModelConfig::to_json() const { return Json{{"id", id}, {"params", params}}; }

ModelConfig model_from_json(const Json& value, const std::string& path) {
  const JsonObject obj(value, path, {"id", "params"});
  if (!obj.has("id")) throw std::invalid_argument(path + ".id: required (or pass --model)");
  ModelConfig out;
  out.id = obj.string("id", "");
  if (obj.has("params")) out.params = obj.at("params");
  // Validate now so errors surface before any computation.
  out.build();
  return out;
}

}  // namespace hvi::cli
