#include "randwidth/run.hpp"

int main(int argc, char** argv) { return randwidth::cli_main(argc, argv); }
