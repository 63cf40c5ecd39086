#include <iostream>
#include <string>
#include <vector>

#include "stratinfer_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return stratinfer::cli::run(args, std::cout, std::cerr);
}
