#include <string>
#include <vector>

#include "photonlab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return photonlab::cli::run(args);
}
