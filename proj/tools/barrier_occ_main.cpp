#include <cstdlib>
#include <iostream>

#include "barrier_occ/cli.hpp"

int main(int argc, char** argv) {
  return barrier_occ::cli::main_entry(argc, argv, std::getenv("BARRIER_OCC_SEED"), std::cout, std::cerr);
}
