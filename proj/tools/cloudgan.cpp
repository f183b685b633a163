#include "cloudgan/cli/commands.hpp"

int main(int argc, char** argv) { return cloudgan::cli::cli_dispatch(argc, argv); }
