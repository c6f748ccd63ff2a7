#pragma once

#include <iosfwd>

namespace mobsig {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitInput = 2,    // bad usage, unreadable or malformed input
  kExitAborted = 3,  // simulation stopped by a runtime failure
};

/// Subcommands run, check and diagram.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mobsig
