#include <cstdint>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "cli/config.hpp"

namespace {

constexpr int kExitComputation = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitDiverged = 3;

std::string describe(const std::string& command) {
  if (command == "bounds") return "Estimate bounds on log p(x) from importance batches (CSV)";
  if (command == "curve") return "Local-evidence curves along one or more paths (CSV)";
  if (command == "tune") return "Select the Holder order alpha by grid search or bisection (JSON)";
  if (command == "train") return "Stochastic gradient ascent on a bound, with optional MMD tracking (CSV)";
  if (command == "diagnose") return "ESS profiles, approximation-error sweeps or MCMC reference samples (CSV)";
  if (command == "oracle") return "Quadrature log marginal and local-evidence curve (JSON)";
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Holder-path thermodynamic variational bounds: estimators, tuning and diagnostics"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out;
  std::optional<std::uint64_t> seed;
  hvi::cli::Overrides overrides;

  for (const auto& name : hvi::cli::command_names()) {
    auto* sub = app.add_subcommand(name, describe(name));
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--out", out, "Output file; the config echo goes to <out>.config.json");
    sub->add_option("--model", overrides.model, "Model id (replaces model.id)");
    if (name != "oracle") {
      sub->add_option("--seed", seed, "Base RNG seed (required)");
      sub->add_option("--samples", overrides.samples, "Importance samples per batch");
    }
    if (name == "train") {
      sub->add_option("--steps", overrides.steps, "Optimizer steps");
      sub->add_option("--learning-rate", overrides.learning_rate, "Gradient ascent step size");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitInvalid;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    auto config = hvi::cli::apply_overrides(hvi::cli::load_config(config_path), overrides);
    const auto result = hvi::cli::run_command(command, config, seed);
    if (out.empty()) {
      std::cout << result.output;
      std::cerr << result.echo.dump(2) << "\n";
    } else {
      hvi::cli::write_outputs(out, result);
    }
    if (result.status == hvi::cli::RunStatus::Diverged) {
      std::cerr << "hvi " << command << ": training diverged; partial trace written\n";
      return kExitDiverged;
    }
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "hvi " << command << ": " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "hvi " << command << ": " << e.what() << "\n";
    return kExitComputation;
  }
}
