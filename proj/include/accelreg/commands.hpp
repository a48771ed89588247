#pragma once

// Subcommands of the accelreg tool. Each takes a RunConfig (file settings
// merged with command-line overrides) and returns the process exit code.
// Errors propagate as exceptions; run_cli maps them to exit codes.

#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "accelreg/config.hpp"

namespace accelreg::commands {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kUsage = 2,
  kData = 3,
  kNumeric = 4,
};

struct KeyInfo {
  std::string_view key;
  std::string_view help;
};

// Config keys accepted by each subcommand.
std::span<const KeyInfo> verify_keys();
std::span<const KeyInfo> filters_keys();
std::span<const KeyInfo> simulate_keys();
std::span<const KeyInfo> fit_keys();

// Output paths may be "-", which writes the file content to `out`.
// Human-readable summaries go to `out` as well unless it already carries the
// file content, in which case they go to `log`.
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& log);
int cmd_filters(const RunConfig& config, std::ostream& out, std::ostream& log);
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& log);
int cmd_fit(const RunConfig& config, std::ostream& out, std::ostream& log);

// Full command line handling (args excludes the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace accelreg::commands
