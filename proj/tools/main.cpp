#include "twoatom/cli.hpp"

int main(int argc, char** argv) { return twoatom::run_cli(argc, argv); }
