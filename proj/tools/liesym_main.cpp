#include <iostream>

#include "liesym/cli.hpp"

int main(int argc, char** argv) { return liesym::run_cli(argc, argv, std::cout, std::cerr); }
