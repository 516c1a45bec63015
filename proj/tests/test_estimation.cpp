#include <doctest.h>
TEST_SUITE_BEGIN("estimation");
TEST_SUITE_END();
