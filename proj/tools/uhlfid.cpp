#include <iostream>
#include <string>
#include <vector>

#include "uhlfid/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return uhlfid::run_cli(args, std::cout, std::cerr);
}
