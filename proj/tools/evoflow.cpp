#include <iostream>
#include <string>
#include <vector>

#include "evoflow/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return evoflow::cli::run_cli(args, std::cout, std::cerr);
}
