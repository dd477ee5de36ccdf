#include "polsig/cli.hpp"

int main(int argc, char** argv) { return polsig::cli::run(argc, argv); }
