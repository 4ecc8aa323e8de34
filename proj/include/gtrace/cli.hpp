#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gtrace::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kParse = 2,
  kMismatch = 3,
  kTimeout = 4,
};

// Runs one subcommand. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace gtrace::cli
