#include "mixkde/cli.hpp"

#include <iostream>

int
main(int argc, char** argv)
{
  return mixkde::cli::run(argc, argv, std::cout, std::cerr);
}
