#include <iostream>

#include "fdsa/cli.hpp"

int main(int argc, char** argv) { return fdsa::cli::run(argc, argv, std::cout, std::cerr); }
