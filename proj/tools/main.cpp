#include <iostream>
#include <string>
#include <vector>

#include "aqc/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return aqc::run_cli(args, std::cout, std::cerr);
}
