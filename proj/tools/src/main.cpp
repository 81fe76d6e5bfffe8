#include <iostream>

#include "consonance_cli/cli.hpp"

int main(int argc, char** argv) { return consonance::cli::main_entry(argc, argv, std::cout, std::cerr); }
