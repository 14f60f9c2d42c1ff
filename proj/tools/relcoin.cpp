#include "relcoin/cli.hpp"

int main(int argc, char** argv) { return relcoin::cli::run(argc, argv); }
