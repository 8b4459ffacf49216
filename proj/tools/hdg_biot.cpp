#include "hdg_biot/cli.hpp"

int main(int argc, char** argv) { return hdg::cli_main(argc, argv); }
