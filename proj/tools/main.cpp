#include <iostream>
#include <string>
#include <vector>

#include "sparse_rls/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return sparse_rls::cli::run(args, std::cout, std::cerr);
}
