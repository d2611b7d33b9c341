#include <iostream>

#include "tc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return tc::run(args, std::cout, std::cerr);
}
