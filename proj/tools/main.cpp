#include "cli.hpp"

int main(int argc, char** argv) { return airmax::cli_main(argc, argv); }
