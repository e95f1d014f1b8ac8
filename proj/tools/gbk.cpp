#include <string>
#include <vector>

#include "gbk/cli.hpp"

int main(int argc, char** argv) {
  return gbk::cli::run_cli(std::vector<std::string>(argv, argv + argc));
}
