#include <iostream>
#include <string>
#include <vector>

#include "evnms_cli/app.hpp"

int main(int argc, char** argv) {
  return evnms::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
