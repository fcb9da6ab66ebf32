#include "subedge/cli_app.hpp"

int main(int argc, char** argv) { return subedge::cli::run(argc, argv); }
