#include "hjr/cli.hpp"

int main(int argc, char** argv) { return hjr::run_cli(argc, argv); }
