#include <iostream>

#include "nonord/cli.hpp"

int main(int argc, char** argv) { return nonord::run_subcommand(argc, argv, std::cout, std::cerr); }
