#include <iostream>

#include "motprobe/runner.hpp"

int main(int argc, char** argv) {
    return motprobe::run_cli(argc, argv, std::cout, std::cerr);
}
