#include <iostream>

#include "nmls/cli.hpp"

int main(int argc, char** argv) {
  return nmls::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
