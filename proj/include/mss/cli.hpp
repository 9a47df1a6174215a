#pragma once

#include <string>
#include <vector>

namespace mss {

struct CliResult {
  int exit_code = 0;
  std::string out;  // the report document
  std::string err;  // diagnostics
};

// Runs one CLI invocation (args exclude the program name). Exit codes:
// 0 success, 2 validation/usage errors, 3 infeasible, 4 over caps.
CliResult run_cli(const std::vector<std::string>& args);

}  // namespace mss
