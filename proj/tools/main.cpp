#include "exogait/cli/cli.hpp"

int main(int argc, char** argv) { return exogait::cli::run(argc, argv); }
