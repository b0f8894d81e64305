#include "cli.hpp"

int main(int argc, char** argv) { return bvpgreen::cli::run_cli(argc, argv); }
