#include <iostream>
#include <string>
#include <vector>

#include "qlocality/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return qlocality::cli::run(args, std::cout, std::cerr);
}
