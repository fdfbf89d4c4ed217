#include <iostream>

#include "runner.hpp"

int main(int argc, char** argv) {
  return simulate::main_entry(argc, argv, std::cout, std::cerr);
}
