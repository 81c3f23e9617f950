#include <iostream>
#include <string>
#include <vector>

#include <dh2/cli.hpp>

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return dh2::run_cli(args, std::cout, std::cerr);
}
