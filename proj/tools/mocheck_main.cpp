#include "mocheck/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return mocheck::run(args, std::cout, std::cerr);
}
