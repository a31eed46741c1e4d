#include "commands.hpp"

int main(int argc, char** argv) { return g3ad_cli::run(argc, argv); }
