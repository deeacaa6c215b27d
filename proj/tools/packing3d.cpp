#include "cli.hpp"

int main(int argc, char** argv) { return packing3d::cli::run_cli(argc, argv); }
