#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "bsmap/precision.hpp"

int main(int argc, char** argv) {
    bsmap::set_working_precision(256);
    doctest::Context ctx(argc, argv);
    return ctx.run();
}
