#include <iostream>

#include "mobsig/cli.hpp"

int main(int argc, char** argv) { return mobsig::run_cli(argc, argv, std::cout, std::cerr); }
