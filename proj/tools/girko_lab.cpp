#include <iostream>
#include <string>
#include <vector>

#include "girko/cli/app.hpp"

int main(int argc, char** argv) {
  return girko::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
