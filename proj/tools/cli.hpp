#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace embeval::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kArgumentError = 2,
  kParseError = 3,
  kInvariantError = 4,
};

// Runs the embeval command line. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace embeval::cli
