#include <iostream>
#include <string>
#include <vector>

#include "covo/harness.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return covo::harness::cmd_main(args, std::cout, std::cerr);
}
