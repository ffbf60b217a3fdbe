#include <iostream>

#include "qsvar/cli.hpp"

int main(int argc, char** argv) { return qsvar::cli::run(argc, argv, std::cout, std::cerr); }
