#include "doctest.h"

TEST_CASE("placeholder_cone") { CHECK(true); }
