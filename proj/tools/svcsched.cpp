#include "svcsched/cli.hpp"

int main(int argc, char** argv) { return svc::run_cli(argc, argv); }
