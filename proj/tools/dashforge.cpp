#include <iostream>
#include <string>
#include <vector>

#include "dashforge/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dashforge::run_cli(args, std::cout, std::cerr);
}
