#include <iostream>

#include "brt/cli.hpp"

int main(int argc, char** argv) { return brt::cli::dispatch(argc, argv, std::cout, std::cerr); }
