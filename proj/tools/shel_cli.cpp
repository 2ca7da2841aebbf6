#include <iostream>

#include "shel/app.hpp"

int main(int argc, char** argv) { return shel::app::run_cli(argc, argv, std::cout, std::cerr); }
