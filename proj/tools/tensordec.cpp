#include <iostream>
#include <vector>

#include "tensordec/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return tensordec::run_cli(args, std::cin, std::cout, std::cerr);
}
