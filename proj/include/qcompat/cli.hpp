#pragma once

// Command-line front end. Each command prints one JSON report on `out`:
//   {"command", "inputs": {name: {"path", "sha256"}}, "config", "result" | "error", "elapsed_ms"}
// Exit codes: 0 ok, 1 selftest failure, 2 I/O or parse error, 3 validation
// error, 4 infeasible optimization, 5 not a symmetry.

#include <ostream>
#include <string>
#include <vector>

namespace qcompat::cli {

enum ExitCode : int {
  kOk = 0,
  kSelftestFailed = 1,
  kIoError = 2,
  kValidationError = 3,
  kInfeasible = 4,
  kNotASymmetry = 5,
};

/// `args` excludes the program name. Diagnostics and selftest progress go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qcompat::cli
