#include <iostream>

#include "ldgf/cli.hpp"

int main(int argc, char** argv) { return ldgf::cli_main(argc, argv, std::cout, std::cerr); }
