#include <iostream>

#include "rsde/commands.hpp"

int main(int argc, char** argv) {
    return rsde::run_cli(argc, argv, std::cout, std::cerr);
}
