#pragma once

#include <string>
#include <vector>

namespace sfc::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kInfeasible = 2,  // infeasible solution or undeployed chains; reports are still written
  kInternal = 3,
};

/// Runs one command line (argv[0] is the program name). Never throws.
int run(const std::vector<std::string>& argv);
int run(int argc, char** argv);

}  // namespace sfc::cli
