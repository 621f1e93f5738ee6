#include <iostream>
#include <string>
#include <vector>

#include "pidstab/cli.hpp"

int main(int argc, char** argv) {
    return pidstab::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout,
                             std::cerr);
}
