#include <iostream>

#include "alphaseed/cli.hpp"

int main(int argc, char** argv) {
    return alphaseed::run_main(argc, argv, std::cout, std::cerr);
}
