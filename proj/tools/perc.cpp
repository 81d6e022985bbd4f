#include "perc_cli.hpp"

int main(int argc, char** argv) {
    return perc::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
