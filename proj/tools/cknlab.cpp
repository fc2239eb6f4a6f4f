#include <iostream>

#include "cknlab/cli.hpp"

int main(int argc, char** argv) { return cknlab::cli::run(argc, argv, std::cout, std::cerr); }
