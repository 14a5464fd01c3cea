#include <iostream>

#include "mteq/cli.hpp"

int main(int argc, char** argv) { return mteq::run_cli(argc, argv, std::cout, std::cerr); }
