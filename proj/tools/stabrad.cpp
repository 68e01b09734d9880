#include <iostream>
#include <string>
#include <vector>

#include "stabrad/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return stabrad::run_cli(args, std::cout, std::cerr);
}
