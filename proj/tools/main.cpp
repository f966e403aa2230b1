#include "cli.hpp"

int main(int argc, char** argv) { return omnidris::cli::run(argc, argv); }
