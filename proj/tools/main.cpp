#include <iostream>

#include "wpc/cli.hpp"

int main(int argc, char** argv) { return wpc::cli_main(argc, argv, std::cout, std::cerr); }
