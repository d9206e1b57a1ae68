#include <iostream>

#include "hpstat/cli.hpp"

int main(int argc, char** argv) { return hpstat::run_cli(argc, argv, std::cout, std::cerr); }
