#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "odrrsim/rational.hpp"

using odrrsim::Ratio;

TEST_CASE("construction normalizes") {
    CHECK(Ratio(550, 700) == Ratio(11, 14));
    CHECK(Ratio(550, 700).num() == 11);
    CHECK(Ratio(550, 700).den() == 14);
    CHECK(Ratio(-6, 4) == Ratio(3, -2));
    CHECK(Ratio(-6, 4).den() == 2);
    CHECK(Ratio(0, 5) == Ratio(0));
}

TEST_CASE("arithmetic is exact") {
    CHECK(Ratio(1, 3) + Ratio(1, 6) == Ratio(1, 2));
    CHECK(Ratio(750) - Ratio(550, 700) * Ratio(700) == Ratio(200));
    CHECK(Ratio(750 * 8, 9000) == Ratio(2, 3));
    CHECK(Ratio(1, 2) / Ratio(1, 4) == Ratio(2));
    CHECK_THROWS_AS(Ratio(1) / Ratio(0), std::domain_error);
}

TEST_CASE("comparisons") {
    CHECK(Ratio(1, 3) < Ratio(1, 2));
    CHECK(Ratio(-1, 3) < Ratio(0));
    CHECK(Ratio(2, 3) <= Ratio(2, 3));
    CHECK(Ratio(5, 4) > Ratio(1));
}

TEST_CASE("floor_div for slot indexing") {
    CHECK(Ratio::floor_div(Ratio(5, 2), Ratio(1)) == 2);
    CHECK(Ratio::floor_div(Ratio(2), Ratio(2, 3)) == 3);
    CHECK(Ratio::floor_div(Ratio(0), Ratio(2, 3)) == 0);
    CHECK(Ratio::floor_div(Ratio(-1, 2), Ratio(1)) == -1);
}

TEST_CASE("parse accepts integers, fractions and decimals") {
    CHECK(Ratio::parse("42") == Ratio(42));
    CHECK(Ratio::parse("550/700") == Ratio(11, 14));
    CHECK(Ratio::parse("1.5") == Ratio(3, 2));
    CHECK(Ratio::parse("0.1") == Ratio(1, 10));
    CHECK(Ratio::parse("-0.25") == Ratio(-1, 4));
    CHECK(Ratio::parse(" 3 / 2 ") == Ratio(3, 2));
    CHECK_THROWS(Ratio::parse(""));
    CHECK_THROWS(Ratio::parse("abc"));
    CHECK_THROWS(Ratio::parse("1.2.3"));
}

TEST_CASE("str is canonical") {
    CHECK(Ratio(4, 2).str() == "2");
    CHECK(Ratio(550, 700).str() == "11/14");
    CHECK(Ratio(-1, 3).str() == "-1/3");
}

TEST_CASE("overflow in narrow is detected") {
    Ratio big(INT64_MAX / 2, 1);
    CHECK_THROWS_AS(big * Ratio(8), std::overflow_error);
}
