#include "cellcov/cli/commands.hpp"

int main(int argc, char** argv) { return cellcov::cli::run(argc, argv); }
