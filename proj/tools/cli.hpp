#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace graphforge::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,      // validation mismatch or unexpected error
  kBadArguments = 2,
  kDataError = 3,
  kConstructionError = 4,
};

/// Runs one command line (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace graphforge::cli
