#include <iostream>
#include <string>
#include <vector>

#include "polardet/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return polardet::cli::cli_dispatch(args, std::cout, std::cerr);
}
