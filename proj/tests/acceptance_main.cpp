#define DOCTEST_CONFIG_IMPLEMENT
#include <cstdio>
#include <doctest.h>

#include "bsmap/precision.hpp"

int main(int argc, char** argv) {
    bsmap::set_working_precision(256);
    std::printf("acceptance suite (256-bit working precision)\n");
    doctest::Context ctx(argc, argv);
    int rc = ctx.run();
    return rc;
}
