#include <iostream>

#include "implicit_cli.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  return implicit_cli::run(argc, argv, std::cin, std::cout, std::cerr);
}
