#include "eulersurf/cli.hpp"

int main(int argc, char** argv) { return eulersurf::cli_dispatch(argc, argv); }
