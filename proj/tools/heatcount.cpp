#include <iostream>
#include <string>
#include <vector>

#include "heatcount/cli.hpp"

int main(int argc, char** argv) {
  return heatcount::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
