#include <iostream>

#include "rmp/cli.hpp"

int main(int argc, char** argv) { return rmp::cli::run(argc, argv, std::cout, std::cerr); }
