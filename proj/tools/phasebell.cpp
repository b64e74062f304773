#include <iostream>

#include "phasebell/cli.hpp"

int main(int argc, char** argv) {
  return phasebell::cli::run(argc, argv, std::cout, std::cerr);
}
