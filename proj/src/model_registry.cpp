#include "hvi/model_registry.hpp"

#include <stdexcept>

#include "hvi/serialization.hpp"

namespace hvi {

namespace {

double positive(const JsonObject& p, std::string_view key, double value) {
  if (!(value > 0.0)) throw std::invalid_argument(p.path(key) + ": must be positive");
  return value;
}

Vector positive(const JsonObject& p, std::string_view key, Vector value) {
  if (!(value.array() > 0.0).all()) throw std::invalid_argument(p.path(key) + ": entries must be positive");
  return value;
}

}  // namespace

const std::vector<std::string>& model_ids() {
  static const std::vector<std::string> ids{"scaled_factor", "conjugate_gaussian", "sin_toy", "ring",
                                            "bayes_regression"};
  return ids;
}

std::unique_ptr<LatentModel> make_model(const std::string& id, const nlohmann::json& params) {
  const Json empty = Json::object();
  const Json& source = params.is_null() ? empty : params;
  const std::string where = "model.params";
  if (id == "scaled_factor") {
    JsonObject p(source, where, {"c"});
    return make_scaled_factor(positive(p, "c", p.number("c", 2.0)));
  }
  if (id == "conjugate_gaussian") {
    JsonObject p(source, where, {"sigma", "x_obs", "q_mean", "q_log_std"});
    const double sigma = positive(p, "sigma", p.number("sigma", 1.0));
    const double x = p.number("x_obs", 0.0);
    if (!p.has("q_mean") && !p.has("q_log_std")) return make_conjugate_gaussian(sigma, x);
    const ConjugateGaussianModel exact(sigma, x);
    return std::make_unique<ConjugateGaussianModel>(sigma, x, p.number("q_mean", exact.posterior_mean()),
                                                    p.number("q_log_std", exact.posterior_log_std()));
  }
  if (id == "sin_toy") {
    JsonObject p(source, where, {"x_obs", "q_mean", "q_std"});
    return std::make_unique<SinToyModel>(p.number("x_obs", 0.0), p.number("q_mean", 0.0),
                                         positive(p, "q_std", p.number("q_std", SinToyModel::kDefaultProposalStd)));
  }
  if (id == "ring") {
    JsonObject p(source, where, {"y_obs", "q_mean", "q_std"});
    return std::make_unique<RingModel>(p.number("y_obs", 1.0), p.vector("q_mean", Vector::Zero(2)),
                                       positive(p, "q_std", p.vector("q_std", Vector::Ones(2))));
  }
  if (id == "bayes_regression") {
    JsonObject p(source, where, {"data_seed", "n", "q_mean", "q_log_std"});
    const auto n = p.unsigned_integer("n", BayesRegressionTruth::kDefaultSize);
    if (n == 0) throw std::invalid_argument(p.path("n") + ": must be positive");
    auto data = simulate_bayes_dataset(p.unsigned_integer("data_seed", 0), n);
    if (!p.has("q_mean") && !p.has("q_log_std")) return make_bayes_regression(std::move(data));
    const BayesRegressionModel fitted(data);
    const Vector& lambda = fitted.parameters().values();
    const Vector mean = p.vector("q_mean", fitted.proposal_mean(lambda));
    const Vector log_std = p.vector("q_log_std", fitted.proposal_log_std(lambda));
    return std::make_unique<BayesRegressionModel>(std::move(data), mean, log_std);
  }
  std::string known;
  for (const auto& m : model_ids()) known += (known.empty() ? "" : ", ") + m;
  throw std::invalid_argument("model.id: unknown model '" + id + "' (expected one of " + known + ")");
}

}  // namespace hvi
