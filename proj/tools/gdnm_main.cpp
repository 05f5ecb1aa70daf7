#include "gdnm/cli.hpp"

int main(int argc, char** argv) {
    return gdnm::cli::run({argv + 1, argv + argc});
}
