#include "sqlsim/cli.hpp"

int main(int argc, char** argv) { return sqlsim::cli::run(argc, argv); }
