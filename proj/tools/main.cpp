#include <iostream>

#include "incentives/cli.hpp"

int main(int argc, char** argv) { return incentives::cli::run(argc, argv, std::cin, std::cout, std::cerr); }
