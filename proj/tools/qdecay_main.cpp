#include "cli_app.hpp"

int main(int argc, char** argv) { return qdecay::cli::run_cli(argc, argv); }
