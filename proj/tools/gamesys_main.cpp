#include <iostream>

#include "gamesys/cli.hpp"

int main(int argc, char** argv) {
  return gamesys::run_cli(argc, argv, std::cout, std::cerr, std::cin);
}
