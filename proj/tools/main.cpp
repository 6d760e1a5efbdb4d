#include "minigap/cli.hpp"

int main(int argc, char** argv) { return minigap::cli::cli_main(argc, argv); }
