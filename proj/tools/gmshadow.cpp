#include <iostream>

#include "gmshadow/cli.hpp"

int main(int argc, char** argv) { return gmshadow::run_command(argc, argv, std::cout, std::cerr); }
