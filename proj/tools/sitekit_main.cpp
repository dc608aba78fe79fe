#include <iostream>
#include <string>
#include <vector>

#include "sitekit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sitekit::run_cli(args, std::cout, std::cerr);
}
