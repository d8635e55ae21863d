#include <iostream>

#include "gcf/cli.hpp"

int main(int argc, char** argv) { return gcf::run_cli(argc, argv, std::cout, std::cerr); }
