#include <iostream>
#include <string>
#include <vector>

#include "chball/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return chball::run_cli(args, std::cout, std::cerr);
}
