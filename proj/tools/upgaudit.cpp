#include "upg/cli.hpp"

#include <iostream>

int main(int argc, char **argv) {
  return upg::run_cli(argc, argv, std::cout, std::cerr);
}
