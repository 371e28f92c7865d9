#include <iostream>

#include "sdrift/experiment/cli.hpp"

int main(int argc, char** argv) { return sdrift::experiment::run(argc, argv, std::cout, std::cerr); }
