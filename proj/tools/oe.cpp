#include "overlap/cli.hpp"

int main(int argc, char** argv) { return overlap::cli::run(argc, argv); }
