#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli/commands.hpp"
#include "cli/config.hpp"

using namespace hvi;
using namespace hvi::cli;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::string error_of(const std::string& command, const Json& config, std::optional<std::uint64_t> seed) {
  try {
    run_command(command, config, seed);
  } catch (const std::invalid_argument& e) {
    return e.what();
  }
  return "";
}

Json sin_toy() { return Json{{"id", "sin_toy"}}; }

}  // namespace

TEST(Config, OverridesReplaceFileValues) {
  const Json file = {{"model", {{"id", "ring"}, {"params", {{"y_obs", 2.0}}}}}, {"samples", 10}};
  Overrides o;
  o.samples = 50;
  o.steps = 7;
  const auto same = apply_overrides(file, o);
  EXPECT_EQ(same["samples"], 50);
  EXPECT_EQ(same["train"]["steps"], 7);
  EXPECT_EQ(same["model"]["params"]["y_obs"], 2.0);
  o.model = "sin_toy";
  const auto other = apply_overrides(file, o);
  EXPECT_EQ(other["model"]["id"], "sin_toy");
  EXPECT_FALSE(other["model"].contains("params"));
}

TEST(Config, LoadRejectsMissingAndMalformedFiles) {
  EXPECT_EQ(load_config(""), Json::object());
  EXPECT_THROW(load_config("/nonexistent/config.json"), std::invalid_argument);
  const auto path = std::filesystem::temp_directory_path() / "hvi_bad_config.json";
  std::ofstream(path) << "{\"model\": ";
  EXPECT_THROW(load_config(path.string()), std::invalid_argument);
  std::ofstream(path) << "[1, 2]";
  EXPECT_THROW(load_config(path.string()), std::invalid_argument);
  std::filesystem::remove(path);
}

TEST(Commands, SeedRequiredForEstimatorCommands) {
  for (const auto& cmd : command_names()) {
    if (!requires_seed(cmd)) continue;
    const auto msg = error_of(cmd, Json{{"model", sin_toy()}}, std::nullopt);
    EXPECT_NE(msg.find("--seed"), std::string::npos) << cmd << ": " << msg;
  }
  EXPECT_FALSE(requires_seed("oracle"));
  EXPECT_NO_THROW(run_command("oracle", Json{{"model", {{"id", "scaled_factor"}}}}, std::nullopt));
}

TEST(Commands, UnknownKeysRejectedWithFieldPath) {
  EXPECT_NE(error_of("bounds", Json{{"model", sin_toy()}, {"sample", 10}}, 1).find("config.sample"),
            std::string::npos);
  EXPECT_NE(error_of("curve", Json{{"model", {{"id", "sin_toy"}, {"params", {{"x", 1.0}}}}}}, 1).find("x"),
            std::string::npos);
  EXPECT_NE(error_of("tune", Json{{"model", sin_toy()}, {"tuning", {{"tol", 0.1}}}}, 1).find("config.tuning.tol"),
            std::string::npos);
  EXPECT_NE(error_of("train", Json{{"model", sin_toy()}, {"train", {{"mmd", {{"mcmc", {{"warmup", 3}}}}}}}}, 1)
                .find("config.train.mmd.mcmc.warmup"),
            std::string::npos);
  EXPECT_NE(error_of("diagnose", Json{{"model", sin_toy()}, {"diagnose", {{"kind", "profile"}, {"K", 3}}}}, 1)
                .find("config.diagnose.K"),
            std::string::npos);
  EXPECT_NE(error_of("bounds", Json{{"model", sin_toy()}, {"bounds", {"elbo", {{"kind", "hbo"}}}}}, 1)
                .find("config.bounds[1]"),
            std::string::npos);
  EXPECT_NE(error_of("nope", Json::object(), 1).find("unknown command"), std::string::npos);
  EXPECT_NE(error_of("bounds", Json::object(), 1).find("config.model"), std::string::npos);
}

TEST(Commands, ValidationHappensBeforeComputation) {
  EXPECT_THROW(run_command("tune", Json{{"model", sin_toy()}, {"tuning", {{"method", "grid"}, {"tolerance", 0.1}}}}, 1),
               std::invalid_argument);
  EXPECT_THROW(run_command("train", Json{{"model", sin_toy()}, {"train", {{"bound", "iw_elbo"}}}}, 1),
               std::invalid_argument);
  EXPECT_THROW(run_command("train", Json{{"model", sin_toy()}, {"train", {{"learning_rate", -1.0}}}}, 1),
               std::invalid_argument);
  EXPECT_THROW(run_command("curve", Json{{"model", sin_toy()}, {"path", {{"kind", "geometric"}}}, {"alphas", {0.5}}},
                           1),
               std::invalid_argument);
  EXPECT_THROW(run_command("diagnose", Json{{"model", {{"id", "scaled_factor"}}},
                                            {"diagnose", {{"kind", "approx_error"}, {"bound", "elbo"}}}},
                           1),
               std::invalid_argument);
}

TEST(Bounds, ScaledFactorColumnsMatchClosedForms) {
  const auto result =
      run_command("bounds", Json{{"model", {{"id", "scaled_factor"}, {"params", {{"c", 2.0}}}}}, {"samples", 17},
                                 {"replicates", 3}},
                  5);
  const auto rows = parse_csv(result.output);
  ASSERT_EQ(rows.size(), 4u);
  ASSERT_EQ(rows[0], (std::vector<std::string>{"seed", "samples", "elbo", "iw_elbo", "rvi[0.5]", "eubo", "wlbo",
                                               "wubo", "tvo"}));
  for (std::size_t r = 1; r < rows.size(); ++r) {
    EXPECT_EQ(rows[r][1], "17");
    for (std::size_t c = 2; c < rows[r].size(); ++c) {
      const double v = std::stod(rows[r][c]);
      const double expected = rows[0][c] == "wlbo" ? 0.5 : rows[0][c] == "wubo" ? 1.0 : std::log(2.0);
      EXPECT_NEAR(v, expected, 1e-15) << rows[0][c];
    }
  }
  EXPECT_EQ(result.echo["command"], "bounds");
  EXPECT_EQ(result.echo["seed"], 5);
  EXPECT_EQ(result.echo["config"]["bounds"].size(), 7u);
}

TEST(Curve, GeometricScaledFactorIsConstantAndBetaColumnIsSchedule) {
  const Json schedule = {{"points", {0.0, 0.1, 0.35, 0.8, 1.0}}};
  const auto result = run_command(
      "curve", Json{{"model", {{"id", "scaled_factor"}}}, {"samples", 20}, {"schedule", schedule}}, 2);
  const auto rows = parse_csv(result.output);
  ASSERT_EQ(rows.size(), 6u);
  const std::vector<double> betas{0.0, 0.1, 0.35, 0.8, 1.0};
  for (std::size_t k = 0; k < betas.size(); ++k) {
    EXPECT_EQ(rows[k + 1][0], "geometric");
    EXPECT_EQ(std::stod(rows[k + 1][1]), betas[k]);
    EXPECT_EQ(rows[k + 1][2], rows[1][2]);
  }
}

TEST(Curve, SinToyAlphaSweepRangesMatchQuadrature) {
  const auto result = run_command("curve",
                                  Json{{"model", sin_toy()},
                                       {"samples", 20000},
                                       {"alphas", {0.0, 0.5, 0.9, 1.0}},
                                       {"schedule", {{"points", {0.0, 0.25, 0.5, 0.75, 1.0}}}},
                                       {"quadrature", true}},
                                  3);
  const auto rows = parse_csv(result.output);
  ASSERT_EQ(rows.size(), 21u);
  for (std::size_t p = 0; p < 4; ++p) {
    std::size_t lo = 0, hi = 0;
    double est_lo = INFINITY, est_hi = -INFINITY, q_lo = INFINITY, q_hi = -INFINITY;
    for (std::size_t k = 0; k < 5; ++k) {
      const auto& row = rows[1 + p * 5 + k];
      const double v = std::stod(row[2]), q = std::stod(row[5]);
      if (v < est_lo) est_lo = v, lo = 1 + p * 5 + k;
      if (v > est_hi) est_hi = v, hi = 1 + p * 5 + k;
      q_lo = std::min(q_lo, q);
      q_hi = std::max(q_hi, q);
    }
    const double se = std::hypot(std::stod(rows[lo][3]), std::stod(rows[hi][3]));
    EXPECT_NEAR(est_hi - est_lo, q_hi - q_lo, 3.0 * se) << rows[1 + p * 5][0];
  }
}

TEST(Tune, GridAndBisectReportSearch) {
  const auto grid = run_command(
      "tune", Json{{"model", sin_toy()}, {"samples", 4000}, {"tuning", {{"candidates", {0.0, 0.98, 1.0}}}}}, 7);
  const auto g = Json::parse(grid.output);
  EXPECT_EQ(g["method"], "grid");
  EXPECT_DOUBLE_EQ(g["alpha_hat"].get<double>(), 0.98);
  EXPECT_EQ(g["table"].size(), 3u);
  EXPECT_EQ(grid.echo["summary"]["alpha_hat"], g["alpha_hat"]);

  const auto bisect = run_command(
      "tune", Json{{"model", sin_toy()}, {"samples", 4000}, {"tuning", {{"method", "bisect"}, {"max_iters", 3}}}}, 7);
  const auto b = Json::parse(bisect.output);
  EXPECT_EQ(b["method"], "bisect");
  EXPECT_EQ(bisect.echo["config"]["tuning"]["alpha_left"], 0.05);
}

TEST(Train, ZeroLearningRateGivesFlatTrace) {
  const auto result = run_command(
      "train", Json{{"model", sin_toy()}, {"samples", 20}, {"train", {{"steps", 5}, {"learning_rate", 0.0}}}}, 4);
  const auto rows = parse_csv(result.output);
  ASSERT_EQ(rows.size(), 7u);
  EXPECT_EQ(rows[0][0], "step");
  for (std::size_t r = 2; r < rows.size(); ++r)
    for (std::size_t c = 2; c < rows[r].size(); ++c) EXPECT_EQ(rows[r][c], rows[1][c]);
  EXPECT_EQ(result.status, RunStatus::Ok);
}

TEST(Train, MmdColumnOnSchedule) {
  const Json mcmc = {{"chains", 2}, {"steps", 1200}, {"burn_in", 200}, {"pilot_steps", 500}};
  const auto result = run_command("train",
                                  Json{{"model", {{"id", "conjugate_gaussian"}}},
                                       {"samples", 30},
                                       {"train", {{"steps", 10}, {"mmd", {{"every", 4}, {"samples", 100}, {"mcmc", mcmc}}}}}},
                                  9);
  const auto rows = parse_csv(result.output);
  ASSERT_EQ(rows.size(), 12u);
  EXPECT_EQ(rows[0].back(), "mmd");
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const std::size_t step = r - 1;
    const bool expected = step % 4 == 0 || step == 10;
    EXPECT_EQ(!rows[r].back().empty(), expected) << "step " << step;
  }
  EXPECT_TRUE(result.echo["summary"]["final_mmd"].is_number());
}

TEST(Train, DivergenceReportsStatus) {
  const auto result = run_command("train",
                                  Json{{"model", {{"id", "conjugate_gaussian"}}},
                                       {"samples", 10},
                                       {"train", {{"steps", 200}, {"learning_rate", 1e6}}}},
                                  1);
  EXPECT_EQ(result.status, RunStatus::Diverged);
  EXPECT_EQ(result.echo["status"], "diverged");
}

TEST(Diagnose, ProfileApproxErrorAndMcmc) {
  const auto profile = run_command(
      "diagnose",
      Json{{"model", sin_toy()}, {"samples", 200}, {"diagnose", {{"kind", "profile"}, {"replicates", 5}}}}, 2);
  EXPECT_EQ(parse_csv(profile.output).size(), 22u);
  EXPECT_TRUE(profile.echo["summary"].contains("ess_spearman_rho"));

  const auto err = run_command("diagnose",
                               Json{{"model", sin_toy()},
                                    {"samples", 50},
                                    {"diagnose", {{"kind", "approx_error"}, {"bound", "elbo"}, {"points", 5}}}},
                               2);
  EXPECT_EQ(parse_csv(err.output).size(), 6u);
  EXPECT_GE(err.echo["summary"]["approx_error"].get<double>(), 0.0);

  const auto mc = run_command(
      "diagnose",
      Json{{"model", {{"id", "ring"}}},
           {"diagnose", {{"kind", "mcmc"}, {"chains", 2}, {"steps", 600}, {"burn_in", 100}, {"pilot_steps", 300}}}},
      2);
  const auto rows = parse_csv(mc.output);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"chain", "z0", "z1"}));
  EXPECT_EQ(rows.size(), 1u + 2u * 500u);
  EXPECT_EQ(rows.back()[0], "1");
}

TEST(Oracle, ReportsQuadratureValues) {
  const auto r = run_command("oracle", Json{{"model", {{"id", "sin_toy"}}}}, std::nullopt);
  const auto j = Json::parse(r.output);
  EXPECT_NEAR(j["log_marginal"].get<double>(), -0.90390603718145091, 1e-12);
  const auto curve = run_command("oracle",
                                 Json{{"model", {{"id", "scaled_factor"}, {"params", {{"c", 10.0}}}}},
                                      {"curve", {{"schedule", {{"kind", "uniform"}, {"intervals", 4}}}}}},
                                 std::nullopt);
  const auto c = Json::parse(curve.output);
  EXPECT_NEAR(c["curve"]["trapezoid_integral"].get<double>(), std::log(10.0), 1e-12);
  EXPECT_EQ(c["curve"]["beta"].size(), 5u);
}

TEST(Determinism, EveryCommandIsByteIdentical) {
  const std::vector<std::pair<std::string, Json>> runs{
      {"bounds", Json{{"model", sin_toy()}, {"samples", 100}, {"replicates", 3}}},
      {"curve", Json{{"model", {{"id", "ring"}}}, {"samples", 100}, {"alphas", {0.0, 0.5}}}},
      {"tune", Json{{"model", sin_toy()}, {"samples", 200}, {"tuning", {{"candidates", {0.2, 0.9}}}}}},
      {"train", Json{{"model", sin_toy()}, {"samples", 20}, {"train", {{"steps", 10}}}}},
      {"diagnose", Json{{"model", sin_toy()}, {"samples", 50}, {"diagnose", {{"kind", "profile"}, {"replicates", 3}}}}},
      {"oracle", Json{{"model", {{"id", "ring"}}}, {"points", 101}}}};
  for (const auto& [cmd, cfg] : runs) {
    const auto a = run_command(cmd, cfg, 12);
    const auto b = run_command(cmd, cfg, 12);
    EXPECT_EQ(a.output, b.output) << cmd;
    EXPECT_EQ(a.echo.dump(), b.echo.dump()) << cmd;
    EXPECT_FALSE(a.output.empty()) << cmd;
  }
}

TEST(Outputs, WrittenAtomicallyWithEcho) {
  const auto dir = std::filesystem::temp_directory_path() / "hvi_cli_outputs";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto out = (dir / "bounds.csv").string();
  const auto result = run_command("bounds", Json{{"model", sin_toy()}, {"samples", 10}}, 1);
  write_outputs(out, result);
  std::ifstream f(out);
  std::stringstream text;
  text << f.rdbuf();
  EXPECT_EQ(text.str(), result.output);
  EXPECT_TRUE(std::filesystem::exists(echo_path(out)));
  EXPECT_EQ(Json::parse(std::ifstream(echo_path(out)))["command"], "bounds");

  const auto missing = (dir / "no_such_dir" / "x.csv").string();
  EXPECT_THROW(write_outputs(missing, result), std::runtime_error);
  std::size_t files = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) files += e.is_regular_file();
  EXPECT_EQ(files, 2u);
  std::filesystem::remove_all(dir);
}
