#include "policygame/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return policygame::run_cli(argc, argv, std::cout, std::cerr); }
