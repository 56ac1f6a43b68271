#include <catch2/catch_amalgamated.hpp>

#include "gqkit/numeral.hpp"

using namespace gqkit;

static NumeralValue plain(std::int64_t v) { return NumeralValue{v, std::nullopt}; }

TEST_CASE("digit strings") {
    REQUIRE(parse_numeral("6") == plain(6));
    REQUIRE(parse_numeral("0") == plain(0));
    REQUIRE(parse_numeral("1,000") == plain(1000));
    REQUIRE(parse_numeral("12,345,678") == plain(12345678));
    REQUIRE(parse_numeral(" 42 ") == plain(42));
}

TEST_CASE("percent suffix strips to the number") {
    REQUIRE(parse_numeral("20%") == plain(20));
    REQUIRE(parse_numeral("9%") == plain(9));
    REQUIRE(parse_numeral("100%") == plain(100));
    REQUIRE_FALSE(parse_numeral("%").has_value());
    REQUIRE_FALSE(parse_numeral("many%").has_value());
}

TEST_CASE("slash fractions keep both halves") {
    auto v = parse_numeral("20/20");
    REQUIRE(v.has_value());
    REQUIRE(v->value == 20);
    REQUIRE(v->denominator == 20);
    REQUIRE(parse_numeral("2/3") == NumeralValue{2, 3});
    REQUIRE_FALSE(parse_numeral("x/3").has_value());
    REQUIRE_FALSE(parse_numeral("2/").has_value());
}

TEST_CASE("number words") {
    REQUIRE(parse_numeral("one") == plain(1));
    REQUIRE(parse_numeral("a") == plain(1));
    REQUIRE(parse_numeral("an") == plain(1));
    REQUIRE(parse_numeral("twelve") == plain(12));
    REQUIRE(parse_numeral("twenty-one") == plain(21));
    REQUIRE(parse_numeral("Ninety nine") == plain(99));
    REQUIRE(parse_numeral("hundred") == plain(100));
    REQUIRE(parse_numeral("two hundred and five") == plain(205));
    REQUIRE(parse_numeral("thousand") == plain(1000));
    REQUIRE(parse_numeral("ten thousand") == plain(10000));
    REQUIRE(parse_numeral("three hundred thousand") == plain(300000));
    REQUIRE(parse_numeral("100 million") == plain(100000000));
    REQUIRE(parse_numeral("two million five hundred") == plain(2000500));
}

TEST_CASE("unreadable inputs yield nothing") {
    REQUIRE_FALSE(parse_numeral("").has_value());
    REQUIRE_FALSE(parse_numeral("   ").has_value());
    REQUIRE_FALSE(parse_numeral("umpteen").has_value());
    REQUIRE_FALSE(parse_numeral("twice").has_value());
    REQUIRE_FALSE(parse_numeral("several").has_value());
    REQUIRE_FALSE(parse_numeral(",5").has_value());
    REQUIRE_FALSE(parse_numeral("5,").has_value());
}
