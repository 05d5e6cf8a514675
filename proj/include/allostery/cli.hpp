#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace allostery {

enum ExitCode : int {
  kExitOk = 0,
  kExitIo = 1,
  kExitVerification = 2,
  kExitExhausted = 3,
  kExitUsage = 4,
};

// Runs the command line `args` (args[0] is the program name) writing normal
// output to `out` and diagnostics to `err`. Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace allostery
