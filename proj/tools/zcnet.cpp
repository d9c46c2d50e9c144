#include <iostream>
#include <string>
#include <vector>

#include "zcnet/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return zcnet::run_cli(args, std::cout, std::cerr);
}
