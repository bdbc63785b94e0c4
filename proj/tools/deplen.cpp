#include <string>
#include <vector>

#include "deplen/cli.hpp"

int main(int argc, char** argv) {
  return deplen::run_cli(std::vector<std::string>(argv, argv + argc));
}
