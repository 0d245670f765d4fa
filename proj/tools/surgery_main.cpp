#include <iostream>

#include "surgery/cli.hpp"

int main(int argc, char** argv) { return surgery::run_cli(argc, argv, std::cout, std::cerr); }
