#pragma once

#include <ostream>

namespace tnm::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitUsage = 2,
  kExitNumerical = 3,
};

/// Entry point of the `tnm` tool; writes reports to `out` and diagnostics to
/// `err`, and returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tnm::cli
