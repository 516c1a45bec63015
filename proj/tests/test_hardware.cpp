#include <doctest.h>
TEST_SUITE_BEGIN("hardware");
TEST_SUITE_END();
