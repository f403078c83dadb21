#include <iostream>
#include <string>
#include <vector>

#include "liqsim/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return liqsim::cli::run(args, std::cout, std::cerr);
}
