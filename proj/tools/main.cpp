#include <iostream>

#include "spectral_poisson/cli.hpp"

int main(int argc, char** argv) { return spoisson::cli::run(argc, argv, std::cout, std::cerr); }
