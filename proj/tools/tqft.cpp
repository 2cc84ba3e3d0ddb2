#include <iostream>

#include "tqft/cli.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  std::vector<std::string> args(argv + 1, argv + argc);
  return tqft::run_cli(args, std::cout, std::cerr);
}
