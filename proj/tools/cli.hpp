#pragma once

// Command-line front end. run_cli is the whole tool minus process plumbing,
// so tests can drive it with argument vectors and string streams.

#include <iosfwd>
#include <string>
#include <vector>

namespace tm2qbf::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kBudget = 2,
  kDisagree = 3,
};

// args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tm2qbf::cli
