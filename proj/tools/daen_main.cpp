#include "daen/cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return daen::cli::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
