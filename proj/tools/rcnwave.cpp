#include <iostream>

#include "rcnwave/cli.hpp"

int main(int argc, char** argv) { return rcnwave::run_cli(argc, argv, std::cout, std::cerr); }
