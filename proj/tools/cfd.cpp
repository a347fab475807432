#include <iostream>
#include <string>
#include <vector>

#include "cfd_cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  const cfd::cli::Outcome result = cfd::cli::dispatch(args);
  std::cout << result.out;
  std::cerr << result.err;
  return result.code;
}
