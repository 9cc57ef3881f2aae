#include <iostream>

#include "lpc/cli.hpp"

int main(int argc, char** argv) { return lpc::cli::run_cli(argc, argv, std::cout, std::cerr); }
