#include <iostream>

#include "srnlsd/cli.hpp"

int main(int argc, char** argv) { return srnlsd::cli::run(argc, argv, std::cout, std::cerr); }
