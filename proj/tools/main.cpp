#include <iostream>

#include "dpres/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return dpres::cli::run(args, std::cout, std::cerr);
}
