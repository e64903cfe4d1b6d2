#include "fermat/cli.hpp"

int main(int argc, char** argv) { return fermat::cli::dispatch(argc, argv); }
