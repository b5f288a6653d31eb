#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tissot {

/// Exit statuses of the command-line tool.
enum ExitStatus : int { kExitOk = 0, kExitUsage = 1, kExitDomain = 2 };

/// Runs the `tissot` command line. args[0] is the program name. Results go
/// to `out` unless --out names a file; diagnostics and usage go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tissot
