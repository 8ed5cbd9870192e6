#include <iostream>

#include "hyperdon/cli.hpp"

int main(int argc, char** argv) {
  return hyperdon::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
