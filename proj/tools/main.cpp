#include "nodalkit/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return nodalkit::run(argc, argv, std::cout, std::cerr);
}
