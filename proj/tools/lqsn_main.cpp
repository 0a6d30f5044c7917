#include <iostream>
#include <vector>

#include "lqsn/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return lqsn::run_command(args, std::cout, std::cerr);
}
