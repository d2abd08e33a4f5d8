#include "doctest.h"

TEST_CASE("placeholder_polyhedron") { CHECK(true); }
