#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace confluo {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitCounterexample = 1,  // also: terms not joinable
  kExitParse = 2,           // usage, syntax or I/O error
  kExitUndeclared = 3,      // an input term mentions an undeclared symbol
  kExitUnknown = 4,         // the budget prevented a verdict
};

/// Runs the tool on `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace confluo
