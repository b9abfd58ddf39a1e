#include <iostream>
#include <string>
#include <vector>

#include "qstat/cli/app.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return qstat::cli::run_cli(args, std::cout, std::cerr);
}
