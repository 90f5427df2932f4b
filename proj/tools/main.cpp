#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return hopf_flow::cli::run(argc, argv, std::cout, std::cerr); }
