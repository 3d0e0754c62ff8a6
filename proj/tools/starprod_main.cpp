#include <iostream>
#include <string>
#include <vector>

#include "starprod/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return starprod::run_command(args, std::cout, std::cerr);
}
