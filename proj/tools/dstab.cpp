#include <iostream>

#include "dstab/cli.hpp"

int main(int argc, char** argv) { return dstab::cli::main(argc, argv, std::cout, std::cerr); }
