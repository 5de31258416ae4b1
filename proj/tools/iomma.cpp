#include <iostream>
#include <string>
#include <vector>

#include "iomma/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return iomma::cli::run(args, std::cout, std::cerr);
}
