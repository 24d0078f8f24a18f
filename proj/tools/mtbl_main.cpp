#include <string>
#include <vector>

#include "mtbl/commands.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mtbl::run_cli(args);
}
