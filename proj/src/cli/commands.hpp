#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace hvi::cli {

/// Subcommand names in help order.
const std::vector<std::string>& command_names();

/// Every command except oracle draws samples and needs an explicit seed.
bool requires_seed(const std::string& command);

enum class RunStatus { Ok, Diverged };

struct CommandResult {
  /// CSV or JSON text, newline-terminated.
  std::string output;
  /// {"command", "seed", "status", "config" (with defaults filled in), "summary"}.
  Json echo;
  RunStatus status = RunStatus::Ok;
};

/// Validates the whole config before computing anything. Validation
/// failures throw std::invalid_argument with the dotted field path.
CommandResult run_command(const std::string& command, const Json& config, std::optional<std::uint64_t> seed);

/// Path of the config echo written next to `out`.
std::string echo_path(const std::string& out);

/// Writes the output and its echo through temporary files renamed into
/// place, so a failed run leaves neither file behind.
void write_outputs(const std::string& out, const CommandResult& result);

}  // namespace hvi::cli
