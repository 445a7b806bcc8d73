#include <string>
#include <vector>

#include "tritforge/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return tritforge::cli::run_cli(args);
}
