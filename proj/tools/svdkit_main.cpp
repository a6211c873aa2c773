#include <iostream>
#include <string>
#include <vector>

#include "svdkit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return svdkit::cli::run(args, std::cout, std::cerr);
}
