#include "rivergraph/cli.hpp"

int main(int argc, char** argv) { return rivergraph::cli::run(argc, argv); }
