#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lcc/report.hpp"

namespace lcc {

/// Exit codes of the command-line driver.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitPrecondition = 2,  // bad arguments, malformed input, precondition violated
  kExitConsistency = 3,   // a recomputed check or a theorem-level consistency test failed
};

/// Runs one command line (without the program name). Reports go to `out` or
/// to the --out file; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Flat `key: value` rendering of a report, one leaf per line.
std::string render_text(const Json& report);

}  // namespace lcc
