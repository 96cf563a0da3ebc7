#include "rdx/cli.hpp"

int main(int argc, char** argv) { return rdx::cli::run(argc, argv).exit_code; }
