#include <iostream>
#include <string>
#include <vector>

#include "qapprox/cli_app.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return qapprox::cli_main(args, std::cin, std::cout, std::cerr);
}
