#include "doctest.h"

TEST_CASE("placeholder_verify") { CHECK(true); }
