#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "hvi/models.hpp"

namespace hvi {

/// Ids accepted by make_model, in a stable order.
const std::vector<std::string>& model_ids();

/// Builds a built-in model from its id and a JSON parameter object.
/// Unknown ids, unknown keys and out-of-range values throw
/// std::invalid_argument naming the offending field.
///
///   scaled_factor       {c}
///   conjugate_gaussian  {sigma, x_obs, q_mean, q_log_std}
///   sin_toy             {x_obs, q_mean, q_std}
///   ring                {y_obs, q_mean: [2], q_std: [2]}
///   bayes_regression    {data_seed, n, q_mean: [3], q_log_std: [3]}
std::unique_ptr<LatentModel> make_model(const std::string& id, const nlohmann::json& params = nlohmann::json::object());

}  // namespace hvi
