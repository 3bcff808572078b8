#include <iostream>
#include <string>
#include <vector>

#include "oneshot/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return oneshot::run_command(args, std::cout, std::cerr);
}
