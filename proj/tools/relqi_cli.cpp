#include <iostream>

#include "relqi/cli.hpp"

int main(int argc, char** argv) { return relqi::cli::run(argc, argv, std::cout, std::cerr); }
