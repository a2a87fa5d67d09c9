#include "fkqsd/cli.hpp"

int main(int argc, char** argv) { return fkqsd::run_cli(argc, argv); }
