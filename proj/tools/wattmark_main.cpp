#include "wattmark/report/cli.hpp"

int main(int argc, char** argv) { return wattmark::report::run_cli(argc, argv); }
