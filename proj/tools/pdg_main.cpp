#include <iostream>
#include <string>
#include <vector>

#include "pdg/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv, argv + argc);
    return pdg::cli_main(args, std::cout, std::cerr);
}
