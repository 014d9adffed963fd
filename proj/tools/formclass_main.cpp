#include <iostream>

#include "formclass/cli.hpp"

int main(int argc, char** argv) {
    return formclass::cli::run(argc, argv, std::cout, std::cerr);
}
