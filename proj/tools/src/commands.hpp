#pragma once

#include <CLI11.hpp>

#include <functional>

namespace gramentropy::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFalse = 1,
  kExitInput = 2,
  kExitNumerical = 3,
  kExitDivergence = 4,
};

/// Adds every subcommand to `app`. After parsing, `run` holds the selected
/// command.
void register_commands(CLI::App& app, std::function<int()>& run);

}  // namespace gramentropy::cli
