#include <doctest.h>
TEST_SUITE_BEGIN("perf");
TEST_SUITE_END();
