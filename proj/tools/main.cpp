#include <iostream>

#include "skewgp/cli.hpp"

int main(int argc, char** argv) { return skewgp::cli::run(argc, argv, std::cout, std::cerr); }
