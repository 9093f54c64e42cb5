#include <iostream>

#include "gergm/cli.hpp"

int main(int argc, char** argv) { return gergm::run_cli(argc, argv, std::cout, std::cerr); }
