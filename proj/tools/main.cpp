#include "rlfrac/cli.hpp"

int main(int argc, char** argv) { return rlfrac::cli::parse_and_run(argc, argv); }
