#include <iostream>

#include "zw/cli.hpp"

int main(int argc, char** argv) {
  return zw::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
