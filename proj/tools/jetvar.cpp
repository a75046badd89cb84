#include <iostream>

#include "jetvar/cli.hpp"

int main(int argc, char** argv)
{
    return jetvar::cli::main(argc, argv, std::cin, std::cout, std::cerr);
}
