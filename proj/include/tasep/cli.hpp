#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tasep {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kExitSuccess = 0,
  kExitUsage = 1,
  kExitAccuracy = 2,
  kExitVerification = 3,
};

/// Runs the command line (args excludes the program name). JSON records go
/// to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tasep
