#include <iostream>

#include "app.hpp"

int main(int argc, char** argv) { return sab_cli::cli_main(argc, argv, std::cout, std::cerr); }
