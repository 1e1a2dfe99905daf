#include <iostream>
#include <string>
#include <vector>

#include "fdrlab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return fdrlab::run_cli(args, std::cout, std::cerr);
}
