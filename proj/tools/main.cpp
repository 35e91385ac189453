#include "dusty/cli.hpp"

int main(int argc, char** argv) { return dusty::cli_main(argc, argv); }
