#include <iostream>

#include "riskrl/cli.hpp"

int main(int argc, char** argv) { return riskrl::run_cli(argc, argv, std::cout, std::cerr); }
