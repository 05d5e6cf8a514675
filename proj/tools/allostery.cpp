#include <iostream>
#include <string>
#include <vector>

#include "allostery/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return allostery::run_cli(args, std::cout, std::cerr);
}
