#include <iostream>

#include "nic_cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return nic::cli::run(args, std::cout, std::cerr);
}
