#include <iostream>

#include "freechoice/cli.hpp"

int main(int argc, char **argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return freechoice::run_cli(args, std::cout, std::cerr);
}
