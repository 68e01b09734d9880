#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stabrad {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitInfeasible = 2, kExitNotConverged = 3 };

/// Runs the command line tool; args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stabrad
