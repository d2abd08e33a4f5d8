#include "doctest.h"

TEST_CASE("placeholder_properties") { CHECK(true); }
