#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) { return nmrdiscord::cli::run(argc, argv, std::cout, std::cerr); }
