#include <iostream>

#include "phasetraffic/cli.hpp"

int main(int argc, char** argv) { return phasetraffic::cli::run_cli(argc, argv, std::cout, std::cerr); }
