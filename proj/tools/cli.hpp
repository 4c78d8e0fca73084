#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qmc::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kVerifyFailed = 2,
  kNoConvergence = 3,
};

/// Runs one command. args excludes the program name. CSV goes to `out`
/// unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qmc::cli
