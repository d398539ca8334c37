#include <iostream>

#include "padicspec/cli.hpp"

int main(int argc, char** argv) {
  return padicspec::cli::main_entry(argc, argv, std::cin, std::cout, std::cerr);
}
