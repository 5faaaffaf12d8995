#include <iostream>

#include "rigmon/cli.hpp"

int main(int argc, char** argv) { return rigmon::cli::run(argc, argv, std::cout, std::cerr); }
