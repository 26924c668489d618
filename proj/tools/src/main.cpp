#include <iostream>

#include "pbclab/cli.hpp"

int main(int argc, char** argv) {
  return pbclab::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
