#include "cli.hpp"

int main(int argc, char** argv) { return trustsim::cli::main_entry(argc, argv); }
