#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace eulersurf {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,      ///< bad flags, unknown subcommand, parameter out of range
  kExitData = 2,       ///< unreadable or invalid input data
  kExitInvariant = 3,  ///< internal check failed (including oracle mismatches)
};

/// Runs the `eulersurf` command line. args[0] is the program name.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_dispatch(int argc, const char* const* argv);

}  // namespace eulersurf
