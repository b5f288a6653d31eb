#include <iostream>
#include <string>
#include <vector>

#include "tissot/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return tissot::run_cli(args, std::cout, std::cerr);
}
