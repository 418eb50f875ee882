#include <iostream>

#include "nhk/cli.hpp"

int main(int argc, char** argv) { return nhk::cli_main(argc, argv, std::cout, std::cerr); }
