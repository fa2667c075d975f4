#include "mgtd/cli.hpp"

int main(int argc, char** argv) { return mgtd::cli::run(argc, argv); }
