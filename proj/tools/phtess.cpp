#include "phtess/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return phtess::cli::run(argc, argv, std::cout, std::cerr); }
