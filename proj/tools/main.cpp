#include "varta/cli.hpp"

int main(int argc, char** argv) { return varta::run_cli(argc, argv); }
