#include "dsm/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return dsm::run_cli(argc, argv, std::cout, std::cerr);
}
