#include "reflectlab/cli.hpp"

int main(int argc, char** argv) { return reflectlab::cli::run(argc, argv); }
