#include <string>
#include <vector>

#include "exonscan/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return exonscan::cli::run(args);
}
