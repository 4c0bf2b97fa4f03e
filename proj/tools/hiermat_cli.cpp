#include <iostream>

#include "hiermat/cli.hpp"

int main(int argc, char** argv) {
    return hiermat::run_cli(argc, argv, std::cout, std::cerr);
}
