#include "mobius/cli.hpp"

int main(int argc, char** argv)
{
    return mobius::cli::parse_and_dispatch(argc, argv);
}
