#include "doctest.h"

TEST_CASE("placeholder_row") { CHECK(true); }
