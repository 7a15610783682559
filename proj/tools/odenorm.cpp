#include <iostream>

#include "odenorm/cli.hpp"

int main(int argc, char** argv) {
  return odenorm::main_dispatch(argc, argv, std::cout, std::cerr);
}
