#pragma once

// Command-line driver: `stocournot <subcommand> [options]`.
//
// Subcommands: solve, classify, profits, pou, poa, sweep, verify.
// Exit codes: 0 success, 1 invalid request (with usage), 2 domain or solver failure.

#include <string>
#include <vector>

namespace stocournot::cli {

inline constexpr const char* kToolName = "stocournot";
inline constexpr const char* kVersion = "0.1.0";

struct CliResult {
  int exit_code = 0;
  /// Document bytes (empty when written to --output).
  std::string out;
  std::string err;
};

/// Runs one command. `args` excludes the program name.
[[nodiscard]] CliResult run(const std::vector<std::string>& args);

}  // namespace stocournot::cli
