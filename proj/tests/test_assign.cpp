#include <doctest.h>
TEST_SUITE_BEGIN("assign");
TEST_SUITE_END();
