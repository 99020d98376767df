#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return mal::cli::run(argc, argv, std::cout, std::cerr); }
