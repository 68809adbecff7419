#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>

#include "hvi/parallel.hpp"
#include "hvi/quadrature.hpp"

namespace hvi::cli {

namespace {

// Seed streams for draws that are not importance batches.
constexpr std::uint64_t kMcmcStream = 0x6d636d63;
constexpr std::uint64_t kMmdStream = 0x6d6d64;

constexpr std::size_t kDefaultSamples = 1000;

struct Common {
  ModelConfig model;
  std::size_t samples = kDefaultSamples;
};

Common read_common(const JsonObject& root, bool with_samples) {
  Common c;
  if (!root.has("model")) throw std::invalid_argument("config.model: required (or pass --model)");
  c.model = model_from_json(root.at("model"), root.path("model"));
  if (with_samples) {
    c.samples = root.unsigned_integer("samples", kDefaultSamples);
    if (c.samples == 0) throw std::invalid_argument("config.samples: must be at least 1");
  }
  return c;
}

Json common_json(const Common& c, bool with_samples) {
  Json j{{"model", c.model.to_json()}};
  if (with_samples) j["samples"] = c.samples;
  return j;
}

std::size_t positive(const JsonObject& obj, std::string_view key, std::size_t fallback) {
  const auto v = obj.unsigned_integer(key, fallback);
  if (v == 0) throw std::invalid_argument(obj.path(key) + ": must be at least 1");
  return v;
}

std::vector<double> checked_betas(const std::vector<double>& betas, const std::string& path) {
  if (betas.empty()) throw std::invalid_argument(path + ": must not be empty");
  for (double b : betas)
    if (!(b >= 0.0 && b <= 1.0)) throw std::invalid_argument(path + ": every beta must lie in [0, 1]");
  return betas;
}

PartitionSchedule read_schedule(const JsonObject& obj, std::string_view key) {
  if (!obj.has(key)) return PartitionSchedule::uniform(20);
  return schedule_from_json(obj.at(key), obj.path(key));
}

McmcConfig read_mcmc(const Json& value, const std::string& path) {
  const JsonObject obj(value, path,
                       {"chains", "steps", "burn_in", "thin", "step_size", "pilot_steps", "overdispersion"});
  McmcConfig c;
  c.chains = positive(obj, "chains", c.chains);
  c.steps = positive(obj, "steps", c.steps);
  c.burn_in = obj.unsigned_integer("burn_in", c.burn_in);
  c.thin = positive(obj, "thin", c.thin);
  c.step_size = obj.number("step_size", c.step_size);
  c.pilot_steps = obj.unsigned_integer("pilot_steps", c.pilot_steps);
  c.overdispersion = obj.number("overdispersion", c.overdispersion);
  if (c.burn_in >= c.steps) throw std::invalid_argument(obj.path("burn_in") + ": must be less than steps");
  if (!(c.step_size > 0.0)) throw std::invalid_argument(obj.path("step_size") + ": must be positive");
  if (!(c.overdispersion > 0.0)) throw std::invalid_argument(obj.path("overdispersion") + ": must be positive");
  return c;
}

Json to_json(const McmcConfig& c) {
  return {{"chains", c.chains},       {"steps", c.steps},           {"burn_in", c.burn_in},
          {"thin", c.thin},           {"step_size", c.step_size},   {"pilot_steps", c.pilot_steps},
          {"overdispersion", c.overdispersion}};
}

Json number_array(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

std::vector<BoundSpec> default_bounds() {
  return {BoundSpec::elbo(), BoundSpec::iw_elbo(), BoundSpec::rvi(0.5), BoundSpec::eubo(),
          BoundSpec::wlbo(),  BoundSpec::wubo(),    BoundSpec::tvo()};
}

struct Prepared {
  Json resolved;
  std::function<CommandResult()> run;
};

std::uint64_t need_seed(const std::string& command, std::optional<std::uint64_t> seed) {
  if (!seed) throw std::invalid_argument("--seed: required for '" + command + "'");
  return *seed;
}

// ---------------------------------------------------------------------------

Prepared prepare_bounds(const Json& config, std::uint64_t seed) {
  const JsonObject root(config, "config", {"model", "samples", "replicates", "bounds"});
  const auto common = read_common(root, true);
  const auto replicates = positive(root, "replicates", 1);
  std::vector<BoundSpec> specs;
  if (root.has("bounds")) {
    const auto& arr = root.at("bounds");
    if (!arr.is_array() || arr.empty()) throw std::invalid_argument("config.bounds: must be a non-empty array");
    for (std::size_t i = 0; i < arr.size(); ++i)
      specs.push_back(bound_from_json(arr[i], "config.bounds[" + std::to_string(i) + "]"));
  } else {
    specs = default_bounds();
  }
  std::set<std::string> ids;
  for (std::size_t i = 0; i < specs.size(); ++i)
    if (!ids.insert(specs[i].id()).second)
      throw std::invalid_argument("config.bounds[" + std::to_string(i) + "]: duplicate bound " + specs[i].id());

  Json resolved = common_json(common, true);
  resolved["replicates"] = replicates;
  resolved["bounds"] = Json::array();
  for (const auto& b : specs) resolved["bounds"].push_back(hvi::to_json(b));

  return {resolved, [=] {
            const auto model = common.model.build();
            std::vector<BoundReport> reports(replicates);
            parallel_for(replicates, [&](std::size_t b) {
              const auto batch = draw_batch(*model, common.samples, derive_seed(seed, b));
              reports[b] = compute_bounds(batch, specs, common.model.id);
            });
            Json means = Json::object();
            for (const auto& b : specs) {
              double sum = 0.0;
              for (const auto& r : reports) sum += r.at(b.id());
              means[b.id()] = sum / static_cast<double>(replicates);
            }
            CommandResult out;
            out.output = bounds_table(reports).str();
            out.echo["summary"] = {{"mean", means}};
            return out;
          }};
}

Prepared prepare_curve(const Json& config, std::uint64_t seed) {
  const JsonObject root(config, "config", {"model", "samples", "path", "alphas", "schedule", "quadrature"});
  const auto common = read_common(root, true);
  if (root.has("path") && root.has("alphas"))
    throw std::invalid_argument("config.alphas: give either path or alphas, not both");
  std::vector<PathSpec> paths;
  if (root.has("alphas")) {
    const auto alphas = root.numbers("alphas", {});
    if (alphas.empty()) throw std::invalid_argument("config.alphas: must not be empty");
    for (double a : alphas) paths.push_back(PathSpec::holder(a));
  } else if (root.has("path")) {
    paths.push_back(path_from_json(root.at("path"), "config.path"));
  } else {
    paths.push_back(PathSpec::geometric());
  }
  const auto schedule = read_schedule(root, "schedule");
  const bool quadrature = root.boolean("quadrature", false);
  if (quadrature && common.model.build()->latent_dim() > 2)
    throw std::invalid_argument("config.quadrature: only available for models with at most two latent dimensions");

  Json resolved = common_json(common, true);
  resolved["schedule"] = hvi::to_json(schedule);
  resolved["quadrature"] = quadrature;
  if (root.has("alphas")) {
    resolved["alphas"] = root.at("alphas");
  } else {
    resolved["path"] = hvi::to_json(paths.front());
  }

  return {resolved, [=] {
            const auto model = common.model.build();
            const auto batch = draw_batch(*model, common.samples, seed);
            const auto& betas = schedule.betas();
            const std::size_t n = paths.size() * betas.size();
            std::vector<LocalEvidenceEstimate> est(n);
            std::vector<double> quad(n, 0.0);
            std::optional<QuadratureTable> table;
            if (quadrature) table.emplace(*model);
            parallel_for(n, [&](std::size_t i) {
              const auto& spec = paths[i / betas.size()];
              const double beta = betas[i % betas.size()];
              est[i] = local_evidence(batch, spec, beta);
              if (table) quad[i] = table->local_evidence(spec, beta);
            });

            std::vector<std::string> header{"path", "beta", "value", "std_err", "ess"};
            if (quadrature) header.push_back("quadrature");
            CsvTable csv(header);
            Json ranges = Json::object();
            for (std::size_t p = 0; p < paths.size(); ++p) {
              double lo = INFINITY, hi = -INFINITY;
              for (std::size_t k = 0; k < betas.size(); ++k) {
                const auto i = p * betas.size() + k;
                std::vector<std::string> row{paths[p].label(), format_double(betas[k]), format_double(est[i].value),
                                             format_double(est[i].std_err), format_double(est[i].ess)};
                if (quadrature) row.push_back(format_double(quad[i]));
                csv.add_row(std::move(row));
                lo = std::min(lo, est[i].value);
                hi = std::max(hi, est[i].value);
              }
              ranges[paths[p].label()] = hi - lo;
            }
            CommandResult out;
            out.output = csv.str();
            out.echo["summary"] = {{"range", ranges}};
            return out;
          }};
}

Prepared prepare_tune(const Json& config, std::uint64_t seed) {
  const JsonObject root(config, "config", {"model", "samples", "tuning"});
  const auto common = read_common(root, true);
  const Json empty = Json::object();
  const JsonObject t(root.has("tuning") ? root.at("tuning") : empty, "config.tuning",
                     {"method", "candidates", "betas", "alpha_left", "alpha_right", "tolerance", "max_iters"});
  const auto method = t.string("method", "grid");
  if (method != "grid" && method != "bisect")
    throw std::invalid_argument("config.tuning.method: expected 'grid' or 'bisect', got '" + method + "'");
  const auto betas = checked_betas(t.numbers("betas", default_test_betas()), "config.tuning.betas");
  if (betas.size() < 2) throw std::invalid_argument("config.tuning.betas: need at least two values");

  Json resolved = common_json(common, true);
  Json tuning{{"method", method}, {"betas", number_array(betas)}};

  if (method == "grid") {
    for (auto key : {"alpha_left", "alpha_right", "tolerance", "max_iters"})
      if (t.has(key)) throw std::invalid_argument(t.path(key) + ": only used by method 'bisect'");
    std::vector<double> candidates;
    for (int k = 0; k <= 100; ++k) candidates.push_back(k / 100.0);
    candidates = t.numbers("candidates", candidates);
    if (candidates.empty()) throw std::invalid_argument("config.tuning.candidates: must not be empty");
    for (double a : candidates)
      if (!std::isfinite(a)) throw std::invalid_argument("config.tuning.candidates: values must be finite");
    tuning["candidates"] = number_array(candidates);
    resolved["tuning"] = tuning;
    return {resolved, [=] {
              const auto model = common.model.build();
              const auto r = tune_alpha_grid(*model, candidates, betas, common.samples, seed);
              CommandResult out;
              out.output = hvi::to_json(r).dump(2) + "\n";
              out.echo["summary"] = {{"alpha_hat", r.alpha_hat}, {"evaluations", r.evaluations}};
              return out;
            }};
  }

  if (t.has("candidates")) throw std::invalid_argument("config.tuning.candidates: only used by method 'grid'");
  const double left = t.number("alpha_left", 0.05);
  const double right = t.number("alpha_right", 1.0);
  const double tolerance = t.number("tolerance", 0.02);
  const auto max_iters = positive(t, "max_iters", 20);
  if (!(left < right)) throw std::invalid_argument("config.tuning.alpha_left: must be less than alpha_right");
  if (!(tolerance > 0.0)) throw std::invalid_argument("config.tuning.tolerance: must be positive");
  tuning["alpha_left"] = left;
  tuning["alpha_right"] = right;
  tuning["tolerance"] = tolerance;
  tuning["max_iters"] = max_iters;
  resolved["tuning"] = tuning;
  return {resolved, [=] {
            const auto model = common.model.build();
            const auto r =
                tune_alpha_bisect(*model, left, right, betas, common.samples, tolerance, max_iters, seed);
            CommandResult out;
            out.output = hvi::to_json(r).dump(2) + "\n";
            out.echo["summary"] = {{"alpha_hat", r.alpha_hat},
                                   {"evaluations", r.evaluations},
                                   {"statistically_flat", r.statistically_flat},
                                   {"exhausted", r.exhausted}};
            return out;
          }};
}

Prepared prepare_train(const Json& config, std::uint64_t seed) {
  const JsonObject root(config, "config", {"model", "samples", "train"});
  const auto common = read_common(root, true);
  const Json empty = Json::object();
  const JsonObject t(root.has("train") ? root.at("train") : empty, "config.train",
                     {"bound", "steps", "learning_rate", "update_theta", "mmd"});
  TrainConfig cfg;
  cfg.samples = common.samples;
  cfg.seed = seed;
  if (t.has("bound")) cfg.bound = bound_from_json(t.at("bound"), "config.train.bound");
  if (cfg.bound.kind == BoundKind::Rvi || cfg.bound.kind == BoundKind::IwElbo)
    throw std::invalid_argument("config.train.bound: no gradient estimator for " + to_string(cfg.bound.kind));
  cfg.steps = t.unsigned_integer("steps", cfg.steps);
  cfg.learning_rate = t.number("learning_rate", cfg.learning_rate);
  if (!std::isfinite(cfg.learning_rate) || cfg.learning_rate < 0.0)
    throw std::invalid_argument("config.train.learning_rate: must be finite and non-negative");
  cfg.update_theta = t.boolean("update_theta", false);
  if (!common.model.build()->has_gradients())
    throw std::invalid_argument("config.model.id: " + common.model.id + " has no parameter gradients");

  bool with_mmd = false;
  std::size_t every = 100, mmd_samples = 1000;
  MmdConfig mmd_cfg;
  McmcConfig mcmc_cfg;
  if (t.has("mmd")) {
    with_mmd = true;
    const JsonObject m(t.at("mmd"), "config.train.mmd", {"every", "samples", "bandwidth", "mcmc"});
    every = positive(m, "every", every);
    mmd_samples = positive(m, "samples", mmd_samples);
    mmd_cfg.bandwidth = m.number("bandwidth", mmd_cfg.bandwidth);
    if (!(mmd_cfg.bandwidth > 0.0)) throw std::invalid_argument("config.train.mmd.bandwidth: must be positive");
    if (m.has("mcmc")) mcmc_cfg = read_mcmc(m.at("mcmc"), "config.train.mmd.mcmc");
    if (cfg.update_theta)
      throw std::invalid_argument("config.train.mmd: the MCMC reference needs a fixed target (update_theta false)");
  }
  mcmc_cfg.seed = derive_seed(seed, kMcmcStream);

  Json resolved = common_json(common, true);
  Json train_json{{"bound", hvi::to_json(cfg.bound)},
             {"steps", cfg.steps},
             {"learning_rate", cfg.learning_rate},
             {"update_theta", cfg.update_theta}};
  if (with_mmd)
    train_json["mmd"] = {{"every", every}, {"samples", mmd_samples}, {"bandwidth", mmd_cfg.bandwidth},
                    {"mcmc", to_json(mcmc_cfg)}};
  resolved["train"] = train_json;

  return {resolved, [=] {
            const auto model = common.model.build();
            const auto trace = hvi::train(*model, model->parameters().values(), cfg);
            CommandResult out;
            out.status = trace.diverged ? RunStatus::Diverged : RunStatus::Ok;
            Json summary{{"steps_completed", trace.rows.empty() ? 0 : trace.rows.back().step},
                         {"final_objective", trace.rows.empty() ? NAN : trace.rows.back().objective},
                         {"diverged", trace.diverged}};
            if (!with_mmd) {
              out.output = trace_table(trace).str();
              out.echo["summary"] = summary;
              return out;
            }
            const auto reference = mcmc_reference(*model, mcmc_cfg);
            const auto norm = Standardization::from_sample(reference.samples);
            const std::size_t n = trace.rows.size();
            std::vector<std::optional<double>> mmd_by_row(n);
            parallel_for(n, [&](std::size_t r) {
              const auto& row = trace.rows[r];
              if ((row.step % every != 0 && r + 1 != n) || !row.lambda.allFinite()) return;
              const auto sample =
                  sample_proposal_matrix(*model, row.lambda, mmd_samples, derive_seed(derive_seed(seed, kMmdStream), row.step));
              mmd_by_row[r] = mmd(sample, reference.samples, norm, mmd_cfg);
            });
            out.output = trace_table(trace, &mmd_by_row).str();
            summary["mcmc_acceptance"] = reference.acceptance_rate;
            summary["final_mmd"] = mmd_by_row.empty() || !mmd_by_row.back() ? Json() : Json(*mmd_by_row.back());
            out.echo["summary"] = summary;
            return out;
          }};
}

Prepared prepare_diagnose(const Json& config, std::uint64_t seed) {
  const JsonObject root(config, "config", {"model", "samples", "diagnose"});
  const auto common = read_common(root, true);
  if (!root.has("diagnose")) throw std::invalid_argument("config.diagnose: required");
  const auto& dj = root.at("diagnose");
  if (!dj.is_object() || !dj.contains("kind"))
    throw std::invalid_argument("config.diagnose.kind: required ('profile', 'approx_error' or 'mcmc')");
  const std::string kind = dj.at("kind").is_string() ? dj.at("kind").get<std::string>() : "";
  Json resolved = common_json(common, true);

  if (kind == "profile") {
    const JsonObject d(dj, "config.diagnose", {"kind", "path", "schedule", "replicates"});
    const auto spec = d.has("path") ? path_from_json(d.at("path"), "config.diagnose.path") : PathSpec::geometric();
    const auto schedule = read_schedule(d, "schedule");
    const auto replicates = d.unsigned_integer("replicates", 50);
    if (replicates < 2) throw std::invalid_argument("config.diagnose.replicates: must be at least 2");
    resolved["diagnose"] = {{"kind", kind},
                            {"path", hvi::to_json(spec)},
                            {"schedule", hvi::to_json(schedule)},
                            {"replicates", replicates}};
    return {resolved, [=] {
              const auto model = common.model.build();
              const auto profile =
                  curve_profile(*model, spec, schedule.betas(), common.samples, replicates, seed);
              const auto rank = spearman(profile.betas, profile.mean_ess);
              CommandResult out;
              out.output = profile_table(profile).str();
              out.echo["summary"] = {{"ess_spearman_rho", rank.rho}, {"ess_spearman_p", rank.p_value}};
              return out;
            }};
  }

  if (kind == "approx_error") {
    const JsonObject d(dj, "config.diagnose", {"kind", "bound", "x_min", "x_max", "points"});
    if (!d.has("bound")) throw std::invalid_argument("config.diagnose.bound: required");
    const auto bound = bound_from_json(d.at("bound"), "config.diagnose.bound");
    const double x_min = d.number("x_min", -2.5);
    const double x_max = d.number("x_max", 2.5);
    const auto points = d.unsigned_integer("points", 101);
    if (!(x_min < x_max)) throw std::invalid_argument("config.diagnose.x_min: must be less than x_max");
    if (points < 2) throw std::invalid_argument("config.diagnose.points: must be at least 2");
    common.model.build_at(x_min);
    resolved["diagnose"] = {{"kind", kind},   {"bound", hvi::to_json(bound)}, {"x_min", x_min},
                            {"x_max", x_max}, {"points", points}};
    return {resolved, [=] {
              std::vector<double> grid(points);
              for (std::size_t i = 0; i < points; ++i)
                grid[i] = x_min + (x_max - x_min) * static_cast<double>(i) / static_cast<double>(points - 1);
              const auto curve =
                  approx_error([&](double x) { return common.model.build_at(x); }, bound, grid, common.samples, seed);
              CommandResult out;
              out.output = approx_error_table(curve).str();
              out.echo["summary"] = {{"approx_error", curve.error}};
              return out;
            }};
  }

  if (kind == "mcmc") {
    Json rest = dj;
    rest.erase("kind");
    auto mc = read_mcmc(rest, "config.diagnose");
    mc.seed = derive_seed(seed, kMcmcStream);
    Json echo = to_json(mc);
    echo["kind"] = kind;
    resolved["diagnose"] = echo;
    // samples is not used by the sampler; keep the echo honest.
    resolved.erase("samples");
    if (root.has("samples")) throw std::invalid_argument("config.samples: not used by diagnose kind 'mcmc'");
    return {resolved, [=] {
              const auto model = common.model.build();
              const auto ref = mcmc_reference(*model, mc);
              std::vector<std::string> header{"chain"};
              for (Eigen::Index d = 0; d < ref.samples.cols(); ++d) header.push_back("z" + std::to_string(d));
              CsvTable csv(header);
              for (Eigen::Index r = 0; r < ref.samples.rows(); ++r) {
                std::vector<std::string> row{std::to_string(static_cast<std::size_t>(r) / ref.per_chain)};
                for (Eigen::Index d = 0; d < ref.samples.cols(); ++d) row.push_back(format_double(ref.samples(r, d)));
                csv.add_row(std::move(row));
              }
              CommandResult out;
              out.output = csv.str();
              out.echo["summary"] = {{"acceptance_rate", ref.acceptance_rate},
                                     {"chain_acceptance", number_array(ref.chain_acceptance)},
                                     {"tuned_step", ref.tuned_step},
                                     {"per_chain", ref.per_chain}};
              return out;
            }};
  }

  throw std::invalid_argument("config.diagnose.kind: expected 'profile', 'approx_error' or 'mcmc', got '" + kind +
                              "'");
}

Prepared prepare_oracle(const Json& config) {
  const JsonObject root(config, "config", {"model", "points", "curve"});
  const auto common = read_common(root, false);
  const auto model = common.model.build();
  if (model->latent_dim() > 2)
    throw std::invalid_argument("config.model.id: quadrature needs at most two latent dimensions");
  const std::size_t default_points =
      model->latent_dim() == 1 ? GridSpec::kDefaultPoints1d : GridSpec::kDefaultPoints2d;
  const auto points = root.unsigned_integer("points", default_points);
  if (points < 2) throw std::invalid_argument("config.points: must be at least 2");

  std::optional<PathSpec> spec;
  std::optional<PartitionSchedule> schedule;
  Json resolved = common_json(common, false);
  resolved["points"] = points;
  if (root.has("curve")) {
    const JsonObject c(root.at("curve"), "config.curve", {"path", "schedule"});
    spec = c.has("path") ? path_from_json(c.at("path"), "config.curve.path") : PathSpec::geometric();
    schedule = read_schedule(c, "schedule");
    resolved["curve"] = {{"path", hvi::to_json(*spec)}, {"schedule", hvi::to_json(*schedule)}};
  }

  return {resolved, [=] {
            const auto m = common.model.build();
            const QuadratureTable table(*m, GridSpec::uniform(m->quadrature_domain(), points));
            Json report{{"model", common.model.id}, {"log_marginal", table.log_marginal()}};
            Json summary{{"log_marginal", table.log_marginal()}};
            if (spec) {
              const auto& betas = schedule->betas();
              std::vector<double> values(betas.size());
              parallel_for(betas.size(), [&](std::size_t k) { values[k] = table.local_evidence(*spec, betas[k]); });
              const double integral = riemann_integrate(betas, values, IntegrationRule::Trapezoid);
              report["curve"] = {{"path", spec->label()},
                                 {"beta", number_array(betas)},
                                 {"local_evidence", number_array(values)},
                                 {"trapezoid_integral", integral}};
              summary["trapezoid_integral"] = integral;
            }
            CommandResult out;
            out.output = report.dump(2) + "\n";
            out.echo["summary"] = summary;
            return out;
          }};
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"bounds", "curve", "tune", "train", "diagnose", "oracle"};
  return names;
}

bool requires_seed(const std::string& command) { return command != "oracle"; }

CommandResult run_command(const std::string& command, const Json& config, std::optional<std::uint64_t> seed) {
  Prepared p;
  if (command == "bounds") {
    p = prepare_bounds(config, need_seed(command, seed));
  } else if (command == "curve") {
    p = prepare_curve(config, need_seed(command, seed));
  } else if (command == "tune") {
    p = prepare_tune(config, need_seed(command, seed));
  } else if (command == "train") {
    p = prepare_train(config, need_seed(command, seed));
  } else if (command == "diagnose") {
    p = prepare_diagnose(config, need_seed(command, seed));
  } else if (command == "oracle") {
    p = prepare_oracle(config);
  } else {
    throw std::invalid_argument("unknown command '" + command + "'");
  }
  auto result = p.run();
  Json summary = result.echo.contains("summary") ? result.echo["summary"] : Json::object();
  result.echo = {{"command", command},
                 {"seed", seed ? Json(*seed) : Json()},
                 {"status", result.status == RunStatus::Ok ? "ok" : "diverged"},
                 {"config", p.resolved},
                 {"summary", summary}};
  return result;
}

std::string echo_path(const std::string& out) { return out + ".config.json"; }

namespace {

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << text;
  f.close();
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace

void write_outputs(const std::string& out, const CommandResult& result) {
  const std::string echo = echo_path(out);
  const std::string out_tmp = out + ".tmp";
  const std::string echo_tmp = echo + ".tmp";
  try {
    write_file(out_tmp, result.output);
    write_file(echo_tmp, result.echo.dump(2) + "\n");
    if (std::rename(echo_tmp.c_str(), echo.c_str()) != 0) throw std::runtime_error("cannot create '" + echo + "'");
    if (std::rename(out_tmp.c_str(), out.c_str()) != 0) {
      std::remove(echo.c_str());
      throw std::runtime_error("cannot create '" + out + "'");
    }
  } catch (...) {
    std::remove(out_tmp.c_str());
    std::remove(echo_tmp.c_str());
    throw;
  }
}

}  // namespace hvi::cli
