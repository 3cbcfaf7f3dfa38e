#include "stateconv/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return stateconv::cli::run(argc, argv, std::cout, std::cerr); }
