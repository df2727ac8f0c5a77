#include "cli_app.hpp"

int main(int argc, char** argv) { return catodyne::cli::run(argc, argv); }
