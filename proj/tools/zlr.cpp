#include "zorn/cli.hpp"

int main(int argc, char** argv) { return zorn::cli_main(argc, argv); }
