#include "coronas/cli.hpp"

int main(int argc, char** argv) { return coronas::cli::run_main(argc, argv); }
