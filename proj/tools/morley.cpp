#include "morley/cli.h"

#include <iostream>

int main(int argc, char** argv)
{
  return morley::run_cli(argc, argv, std::cout, std::cerr);
}
