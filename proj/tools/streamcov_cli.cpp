#include <iostream>

#include "streamcov/cli.hpp"

int main(int argc, char** argv) {
  return streamcov::cli_main(argc, argv, std::cout, std::cerr);
}
