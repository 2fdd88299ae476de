#include "cli.hpp"

int main(int argc, char** argv) { return precis::cli_main(argc, argv); }
