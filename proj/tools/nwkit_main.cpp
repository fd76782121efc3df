#include "nwkit/cli.hpp"

int main(int argc, char** argv) { return nwkit::cli::main_entry(argc, argv); }
