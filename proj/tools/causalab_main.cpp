#include "causalab/run.hpp"

int main(int argc, char** argv) { return causalab::run::run_cli(argc, argv); }
