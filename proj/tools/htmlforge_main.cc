#include <iostream>

#include "htmlforge/cli/cli.h"

int main(int argc, char** argv) {
  return htmlforge::cli::run_cli(argc, argv, std::cout, std::cerr);
}
