#include <iostream>
#include <string>
#include <vector>

#include "irswpcn/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return irswpcn::run_cli(args, std::cout, std::cerr);
}
