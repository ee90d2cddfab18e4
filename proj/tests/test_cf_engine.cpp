#include <catch2/catch_amalgamated.hpp>
#include "randsum/randsum.hpp"
TEST_CASE("placeholder test_cf_engine") { CHECK(true); }
