#include "bellcc/cli.hpp"

int main(int argc, char** argv) { return bellcc::cli::run_command(argc, argv); }
