#include "gridwar/cli.hpp"

int main(int argc, char** argv) { return gridwar::cli::run(argc, argv); }
