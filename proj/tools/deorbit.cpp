#include <iostream>

#include "deorbit/cli.hpp"

int main(int argc, char** argv) { return deorbit::cli::main(argc, argv, std::cout, std::cerr); }
