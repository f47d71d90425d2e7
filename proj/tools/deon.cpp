#include <iostream>

#include "deon/cli.hpp"

int main(int argc, char** argv) { return deon::cli::main(argc, argv, std::cout, std::cerr); }
