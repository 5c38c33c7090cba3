#include "fzk/cli.hpp"

int main(int argc, char** argv) { return fzk::cli_main(argc, argv); }
