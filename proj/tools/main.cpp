#include "cli.hpp"

int main(int argc, char** argv) { return sfc::cli::run(argc, argv); }
