#include "torusbie/cli.hpp"

int main(int argc, char** argv) {
    return torusbie::run(argc, argv);
}
