#include "freeclark/cli.hpp"

int main(int argc, char** argv) { return freeclark::run_cli(argc, argv); }
