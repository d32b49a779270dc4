#include "cli/commands.hpp"

int main(int argc, char** argv) { return bf::cli::run(argc, argv); }
