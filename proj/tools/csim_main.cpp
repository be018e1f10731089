#include <iostream>

#include "csim/cli.hpp"

int main(int argc, char** argv) { return csim::cli_main(argc, argv, std::cout, std::cerr); }
