#include <iostream>
#include <string>
#include <vector>

#include "accelreg/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return accelreg::commands::run_cli(args, std::cout, std::cerr);
}
