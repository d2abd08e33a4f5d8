#include "doctest.h"

TEST_CASE("placeholder_expr") { CHECK(true); }
