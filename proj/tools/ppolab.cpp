#include "ppolab/cli.hpp"

int main(int argc, char** argv) { return ppolab::cli::run_cli(argc, argv); }
