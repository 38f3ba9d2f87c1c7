#include "qwscatter/cli.hpp"

int main(int argc, char** argv) { return qws::cli_main(argc, argv); }
