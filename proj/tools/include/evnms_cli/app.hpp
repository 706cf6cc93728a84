#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace evnms::cli {

/// Process exit codes, one per diagnostic class.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitConfig = 3,
  kExitIo = 4,
  kExitParse = 5,
  kExitStream = 6,
};

/// Runs the command line `args` (args[0] is the program name). Human output
/// goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace evnms::cli
