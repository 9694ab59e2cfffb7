#include <iostream>

#include "kefun/cli.hpp"

int main(int argc, char** argv) { return kefun::cli::run(argc, argv, std::cout, std::cerr); }
