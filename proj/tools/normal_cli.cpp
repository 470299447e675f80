#include "cli.hpp"

int main(int argc, char **argv) { return normal::cli::run(argc, argv); }
