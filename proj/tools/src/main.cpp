#include <iostream>

#include "xenorisk/cli/run.hpp"

int main(int argc, char** argv) {
  return xenorisk::cli::run_command({argv, argv + argc}, std::cout, std::cerr);
}
