#include <iostream>
#include <string>
#include <vector>

#include "multibeam/cli.hpp"

int main(int argc, char** argv) {
  return multibeam::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
