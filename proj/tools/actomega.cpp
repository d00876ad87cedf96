#include <iostream>

#include "actomega/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return actomega::cli::run(args, std::cout, std::cerr);
}
