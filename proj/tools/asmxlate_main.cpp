#include "cli.hpp"

int main(int argc, char** argv) { return asmxlate::cli::run(argc, argv); }
