#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "rotwave/cli/config.hpp"

namespace rotwave::cli {

enum ExitCode : int { kSuccess = 0, kConfigError = 2, kNumericalError = 3 };

struct CommandOptions {
  std::filesystem::path out_dir;  // empty: use output.directory from the config
  bool plot_script = false;
};

/// Each command writes its files into the output directory and a short
/// summary to `log`. Library exceptions propagate; run_command maps them
/// to exit codes.
void cmd_simulate(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log);
void cmd_nearfar(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log);
void cmd_kernel_check(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log);
void cmd_mc_check(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log);
void cmd_report(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log);

/// Dispatches by subcommand name and converts failures to exit codes,
/// printing the message to `err`.
int run_command(const std::string& name, const RunConfig& cfg, const CommandOptions& opt,
                std::ostream& log, std::ostream& err);

}  // namespace rotwave::cli
