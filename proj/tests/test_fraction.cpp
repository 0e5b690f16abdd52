#include <doctest.h>

#include "packsim/fraction.hpp"
#include "packsim/grid.hpp"

using namespace packsim;

TEST_CASE("fractions normalize and compare exactly") {
    CHECK(Frac(2, 4) == Frac(1, 2));
    CHECK(Frac(-2, -4) == Frac(1, 2));
    CHECK(Frac(2, -4) == Frac(-1, 2));
    CHECK(Frac(1, 3) < Frac(1, 2));
    CHECK(Frac(2, 3) * Frac(1, 2) == Frac(1, 3));
    CHECK(Frac(1, 2) + Frac(1, 3) == Frac(5, 6));
    CHECK(Frac(1, 2) - Frac(1, 3) == Frac(1, 6));
    CHECK(Frac(1, 2) / Frac(1, 4) == Frac(2, 1));
    CHECK_THROWS_AS(Frac(1, 0), std::domain_error);
    CHECK_THROWS_AS(Frac(1, 2) / Frac(0, 1), std::domain_error);
}

TEST_CASE("decimal and fraction parsing") {
    CHECK(parse_frac("0.4") == Frac(2, 5));
    CHECK(parse_frac("2/3") == Frac(2, 3));
    CHECK(parse_frac("1") == Frac(1, 1));
    CHECK(parse_frac("-0.25") == Frac(-1, 4));
    CHECK(parse_frac("10") == Frac(10, 1));
    CHECK_THROWS(parse_frac(""));
    CHECK_THROWS(parse_frac("0.abc"));
}

TEST_CASE("grid round trips") {
    CHECK(to_units(0.4) == 400'000'000'000);
    CHECK(to_real(to_units(0.4)) == 0.4);
    CHECK(units_to_frac(to_units(0.25)) == Frac(1, 4));
    CHECK(frac_on_grid(Frac(1, 4)));
    CHECK(!frac_on_grid(Frac(1, 3)));
    CHECK(frac_to_units(Frac(1, 8)) == kUnitScale / 8);
}

TEST_CASE("frac strings") {
    CHECK(Frac(2, 3).str() == "2/3");
    CHECK(Frac(4, 2).str() == "2");
}
