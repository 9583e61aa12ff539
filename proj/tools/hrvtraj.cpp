#include <iostream>
#include <string>
#include <vector>

#include "hrvtraj/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return hrvtraj::cli::run(args, std::cout, std::cerr);
}
