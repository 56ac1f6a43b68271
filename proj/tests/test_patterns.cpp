#include <catch2/catch_amalgamated.hpp>

#include <regex>
#include <set>

#include "gqkit/patterns.hpp"
#include "test_util.hpp"

using namespace gqkit;

TEST_CASE("default rules compile and cover every category") {
    const auto& ps = default_patterns();
    REQUIRE(ps.entries.size() == 11);
    std::set<Kind> covered;
    for (const auto& e : ps.entries) covered.insert(e.kind);
    REQUIRE(covered.size() == all_kinds.size());
}

TEST_CASE("shipped pattern file matches the built-in rules byte for byte") {
    REQUIRE(slurp(data_path("patterns.tsv")) == default_pattern_source());
}

TEST_CASE("counting priority ranks") {
    REQUIRE(PatternSet::priority_rank(Kind::between) == 0);
    REQUIRE(PatternSet::priority_rank(Kind::fraction) == 1);
    REQUIRE(PatternSet::priority_rank(Kind::percent) == 2);
    REQUIRE(PatternSet::priority_rank(Kind::more_than) == 3);
    REQUIRE(PatternSet::priority_rank(Kind::less_than) == 4);
    REQUIRE(PatternSet::priority_rank(Kind::exactly) == 5);
    for (Kind k : {Kind::some, Kind::all, Kind::most, Kind::few, Kind::each_other}) {
        REQUIRE(PatternSet::priority_rank(k) == -1);
        REQUIRE_FALSE(PatternSet::is_counting(k));
    }
    REQUIRE(PatternSet::is_counting(Kind::exactly));
}

TEST_CASE("escaped slashes normalize to literal slashes") {
    REQUIRE(detail::normalize_slashes("a\\/b") == "a/b");
    REQUIRE(detail::normalize_slashes("\\d+\\/\\d+") == "\\d+/\\d+");
    REQUIRE(detail::normalize_slashes("plain") == "plain");
    // A trailing backslash stays put.
    REQUIRE(detail::normalize_slashes("x\\") == "x\\");
}

TEST_CASE("each default rule fires on a canonical serialization") {
    const auto& ps = default_patterns();
    auto matches = [&](Kind k, const std::string& text) {
        for (const auto& e : ps.entries)
            if (e.kind == k && std::regex_search(text, e.re)) return true;
        return false;
    };
    REQUIRE(matches(Kind::some, "some/det dog/nsubj run/root"));
    REQUIRE(matches(Kind::all, "every/det child/nsubj laugh/root"));
    REQUIRE(matches(Kind::all, "everyone/nsubj laugh/root"));
    REQUIRE(matches(Kind::more_than, "more/advmod than/fixed five/nummod guy/nsubj"));
    REQUIRE(matches(Kind::less_than, "few/advmod than/fixed ten/nummod house/obj"));
    REQUIRE(matches(Kind::exactly, "three/nummod singer/nsubj sing/root"));
    REQUIRE(matches(Kind::between, "between/case 1800/obl and/cc 1850/conj"));
    REQUIRE(matches(Kind::fraction, "20/20/nummod vision/obj"));
    REQUIRE(matches(Kind::percent, "9/nummod %/nmod interest/obj"));
    REQUIRE(matches(Kind::most, "most/amod people/nsubj agree/root"));
    REQUIRE(matches(Kind::few, "few/amod teenager/nsubj appreciate/root"));
    REQUIRE(matches(Kind::each_other, "each/det other/obj greet/root"));

    REQUIRE_FALSE(matches(Kind::each_other, "each/det child/nsubj"));
    REQUIRE_FALSE(matches(Kind::percent, "nine/nummod %/nmod x/obj"));
}

TEST_CASE("custom files compile with comments and blank lines") {
    std::string text =
        "# two-line file\n"
        "\n"
        "some\tsome\\/det\n"
        "all\tall\\/det\n"
        "more_than\tmore\n"
        "less_than\tless\n"
        "exactly\texact\n"
        "between\tbetw\n"
        "fraction\tfrac\n"
        "percent\tpct\n"
        "most\tmost\n"
        "few\tfew\n"
        "each_other\teach\n";
    auto ps = compile_patterns(text);
    REQUIRE(ps.entries.size() == 11);
    REQUIRE(ps.entries[0].kind == Kind::some);
    REQUIRE(ps.entries[0].source == "some\\/det");
    REQUIRE(std::regex_search(std::string("some/det x"), ps.entries[0].re));
}

TEST_CASE("pattern file errors carry line numbers") {
    SECTION("missing tab") {
        try {
            compile_patterns(std::string("some only-one-column\n"));
            FAIL("expected PatternError");
        } catch (const PatternError& e) {
            REQUIRE(std::string(e.what()).find("(line 1)") != std::string::npos);
        }
    }
    SECTION("unknown category") {
        REQUIRE_THROWS_AS(compile_patterns(std::string("bogus\tx\n")), PatternError);
    }
    SECTION("empty pattern") {
        REQUIRE_THROWS_AS(compile_patterns(std::string("some\t\n")), PatternError);
    }
    SECTION("duplicate rule") {
        REQUIRE_THROWS_AS(compile_patterns(std::string("some\tx\nsome\tx\n")),
                          PatternError);
    }
    SECTION("bad regex") {
        REQUIRE_THROWS_AS(compile_patterns(std::string("some\t(unclosed\n")),
                          PatternError);
    }
    SECTION("missing category") {
        // All rules valid but nothing covers "few".
        std::string text =
            "some\ta\nall\tb\nmore_than\tc\nless_than\td\nexactly\te\n"
            "between\tf\nfraction\tg\npercent\th\nmost\ti\neach_other\tj\n";
        try {
            compile_patterns(text);
            FAIL("expected PatternError");
        } catch (const PatternError& e) {
            REQUIRE(std::string(e.what()).find("few") != std::string::npos);
        }
    }
}
