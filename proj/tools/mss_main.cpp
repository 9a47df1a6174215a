#include <iostream>
#include <string>
#include <vector>

#include "mss/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  mss::CliResult result = mss::run_cli(args);
  if (!result.out.empty()) std::cout << result.out << "\n";
  if (!result.err.empty()) std::cerr << result.err << "\n";
  return result.exit_code;
}
