#include <iostream>
#include <string>
#include <vector>

#include "sboxnl/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return sboxnl::run_cli(args, std::cout, std::cerr);
}
