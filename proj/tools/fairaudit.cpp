#include <iostream>

#include "fairaudit/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fairaudit::run_cli(args, std::cout, std::cerr);
}
