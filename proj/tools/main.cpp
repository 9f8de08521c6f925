#include "lrbox/harness/cli.hpp"

int main(int argc, char** argv) { return lrbox::run_cli(argc, argv); }
