#include "svdmds/cli.hpp"

int main(int argc, char** argv) { return svdmds::cli_main(argc, argv); }
