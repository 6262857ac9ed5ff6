#include <string>
#include <vector>

#include "ultraposet/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ultraposet::run_cli(args);
}
