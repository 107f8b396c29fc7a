#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>
#include <unistd.h>

#include "cellkit/cli.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  cellkit::CliEnvironment env;
  env.stdout_is_tty = ::isatty(STDOUT_FILENO) != 0;
  if (const char* dir = std::getenv("CELLKIT_CACHE_DIR")) env.cache_dir = dir;
  std::vector<std::string> args(argv + 1, argv + argc);
  return cellkit::run_cli(args, std::cout, std::cerr, env);
}
