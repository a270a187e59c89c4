#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace prodcrit::cli {

/// Process exit codes.
enum ExitCode : int {
  kExitProduct = 0,  // also plain success
  kExitNotProduct = 1,
  kExitUsage = 2,
  kExitNumerical = 3,
};

/// Runs one command line (args excludes the program name). Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace prodcrit::cli
