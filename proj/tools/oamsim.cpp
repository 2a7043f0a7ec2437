#include <iostream>
#include <string>
#include <vector>

#include "oamsim/cli.hpp"

int main(int argc, char** argv)
{
    const std::vector<std::string> args(argv, argv + argc);
    return oamsim::cli::run(args, std::cout, std::cerr);
}
