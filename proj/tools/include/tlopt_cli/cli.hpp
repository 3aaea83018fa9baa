#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tlopt::cli {

enum ExitCode : int {
  kOk = 0,
  kViolations = 1,
  kParseError = 2,
  kInfeasible = 3,
};

/// Runs the command line `args` (without the program name). Reports go to
/// `out`, diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Lowercase hex SHA-256 of `bytes`.
std::string sha256_hex(const std::string& bytes);

}  // namespace tlopt::cli
