#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace svc {

enum ExitCode : int { kExitOk = 0, kExitInfeasible = 1, kExitInput = 2, kExitCap = 3 };

/// Runs one command line; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace svc
