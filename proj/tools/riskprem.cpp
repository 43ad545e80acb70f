// SPDX-License-Identifier: MIT
#include <iostream>
#include <string>
#include <vector>

#include "riskprem/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return riskprem::run_cli(args, std::cout, std::cerr);
}
