#include "cli_app.hpp"

int main(int argc, char** argv) { return pfspec::cli::run_main(argc, argv); }
