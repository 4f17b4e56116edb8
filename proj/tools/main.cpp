#include <iostream>

#include "insitu/cli.hpp"

int main(int argc, char** argv) {
  return insitu::run_cli(argc, argv, std::cout, std::cerr);
}
