#include <catch2/catch_amalgamated.hpp>

#include "gqkit/formula.hpp"
#include "gqkit/formula_json.hpp"

using namespace gqkit;

namespace {

FiniteModel demo_model() {
    FiniteModel m;
    m.universe_size = 6;
    m.sets["dog"] = {0, 1, 2, 3};
    m.sets["run"] = {0, 1, 2};
    m.sets["sit"] = {3, 4};
    return m;
}

}  // namespace

TEST_CASE("set expression evaluation") {
    auto m = demo_model();
    auto dog = SetExpr::named("dog");
    auto run = SetExpr::named("run");
    auto sit = SetExpr::named("sit");

    REQUIRE(eval_set(SetExpr::intersect({dog, run}), m) == std::set<std::int64_t>{0, 1, 2});
    REQUIRE(eval_set(SetExpr::unite({run, sit}), m) == std::set<std::int64_t>{0, 1, 2, 3, 4});
    REQUIRE(eval_set(SetExpr::diff(dog, run), m) == std::set<std::int64_t>{3});
    REQUIRE_THROWS_AS(eval_set(SetExpr::named("cat"), m), UnknownSetError);
    REQUIRE_THROWS_AS(SetExpr::intersect({}), FormulaError);
}

TEST_CASE("model-theoretic satisfaction") {
    auto m = demo_model();
    REQUIRE(satisfies(m, *quant(Quantifier::some(), "dog", "run")));
    REQUIRE(satisfies(m, *quant(Quantifier::most(), "dog", "run")));
    REQUIRE_FALSE(satisfies(m, *quant(Quantifier::all(), "dog", "run")));
    REQUIRE(satisfies(m, *negation(quant(Quantifier::all(), "dog", "run"))));
    REQUIRE(satisfies(m, *conjunction({quant(Quantifier::exactly(3), "dog", "run"),
                                       subset("run", "dog")})));
    REQUIRE(satisfies(m, *disjunction({quant(Quantifier::all(), "dog", "run"),
                                       quant(Quantifier::some(), "dog", "sit")})));
    REQUIRE(satisfies(m, *card(SetExpr::diff(SetExpr::named("dog"), SetExpr::named("run")),
                               CardOp::eq, 1)));
    REQUIRE(satisfies(m, *card(SetExpr::named("dog"), CardOp::ge, 4)));
    REQUIRE_FALSE(satisfies(m, *card(SetExpr::named("dog"), CardOp::le, 3)));
    REQUIRE(satisfies(m, *disjoint("run", "sit")));
    REQUIRE_FALSE(satisfies(m, *subset("sit", "dog")));
}

TEST_CASE("builders validate their arguments") {
    REQUIRE_THROWS_AS(quant(Quantifier::between(5, 2), "a", "b"), InvalidQuantifierError);
    REQUIRE_THROWS_AS(conjunction({}), FormulaError);
    REQUIRE_THROWS_AS(disjunction({}), FormulaError);
    REQUIRE_THROWS_AS(negation(nullptr), FormulaError);
    REQUIRE_THROWS_AS(card(SetExpr::named("a"), CardOp::eq, -1), FormulaError);
}

TEST_CASE("collected names and kinds") {
    auto f = conjunction({quant(Quantifier::most(), "man", "blue"),
                          negation(quant(Quantifier::some(), "man", "red")),
                          subset("blue", "man")});
    REQUIRE(collect_set_names(*f) == std::set<std::string>{"blue", "man", "red"});
    auto kinds = collect_kinds(*f);
    REQUIRE(kinds == std::vector<Kind>{Kind::some, Kind::most});
}

TEST_CASE("signatures") {
    Signature sig{{"a", "b"}, 24};
    REQUIRE_NOTHROW(sig.validate());
    REQUIRE(sig.index_of("b") == 1);
    REQUIRE_THROWS_AS(sig.index_of("c"), UnknownSetError);

    REQUIRE_THROWS_AS((Signature{{}, 24}).validate(), FormulaError);
    REQUIRE_THROWS_AS((Signature{{"a", "a"}, 24}).validate(), FormulaError);
    REQUIRE_THROWS_AS((Signature{{"a"}, -1}).validate(), FormulaError);

    auto f = quant(Quantifier::some(), "a", "z");
    REQUIRE_THROWS_AS(check_declared(*f, sig), UnknownSetError);
    REQUIRE_NOTHROW(check_declared(*quant(Quantifier::some(), "a", "b"), sig));
}

TEST_CASE("formula JSON round-trips") {
    json j = json::parse(R"({
      "and": [
        {"quant": {"kind": "fraction", "p": 1, "k": 2, "cmp": "lt",
                   "restrictor": "singer", "scope": "argentina"}},
        {"not": {"quant": {"kind": "all", "restrictor": "singer", "scope": "argentina"}}},
        {"card": {"set": {"diff": [{"name": "singer"},
                                   {"union": [{"name": "argentina"}]}]},
                  "op": "ge", "value": 2}},
        {"subset": ["argentina", "singer"]},
        {"disjoint": ["argentina", "capeverde"]}
      ]
    })");
    auto f = parse_formula(j);
    auto j2 = formula_to_json(*f);
    auto f2 = parse_formula(j2);
    REQUIRE(formula_to_json(*f2) == j2);

    FiniteModel m;
    m.universe_size = 8;
    m.sets["singer"] = {0, 1, 2, 3, 4, 5};
    m.sets["argentina"] = {0, 1};
    m.sets["capeverde"] = {2};
    REQUIRE(satisfies(m, *f) == satisfies(m, *f2));
    REQUIRE(satisfies(m, *f));
}

TEST_CASE("formula JSON rejects malformed input") {
    REQUIRE_THROWS_AS(parse_formula(json::parse(R"({"quant": {"kind": "zilch",
        "restrictor": "a", "scope": "b"}})")), FormulaError);
    REQUIRE_THROWS_AS(parse_formula(json::parse(R"({"and": []})")), FormulaError);
    REQUIRE_THROWS_AS(parse_formula(json::parse(R"({"what": 1})")), FormulaError);
    REQUIRE_THROWS_AS(parse_formula(json::parse(R"({"subset": ["a"]})")), FormulaError);
    REQUIRE_THROWS_AS(parse_formula(json::parse("[1,2]")), FormulaError);
    // invalid parameters surface as FormulaError, not InvalidQuantifierError
    REQUIRE_THROWS_AS(parse_formula(json::parse(R"({"quant": {"kind": "between",
        "p": 5, "k": 2, "restrictor": "a", "scope": "b"}})")), FormulaError);
    REQUIRE_THROWS_AS(parse_signature(json::parse(R"({"bound": 3})")), FormulaError);
    REQUIRE_THROWS_AS(parse_signature(json::parse(R"({"sets": ["a", "a"]})")), FormulaError);
}

TEST_CASE("signature and model JSON") {
    auto sig = parse_signature(json::parse(R"({"sets": ["x", "y"]})"));
    REQUIRE(sig.universe_bound == 24);  // default bound
    auto j = signature_to_json(sig);
    REQUIRE(parse_signature(j) == sig);

    auto m = demo_model();
    auto mj = model_to_json(m);
    REQUIRE(parse_model(mj) == m);
    REQUIRE_THROWS_AS(parse_model(json::parse(R"({"universe_size": 1,
        "sets": {"a": [5]}})")), GqError);
}
