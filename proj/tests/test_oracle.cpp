#include <catch2/catch_amalgamated.hpp>

#include <optional>
#include <set>

#include "gqkit/formula.hpp"
#include "gqkit/oracle.hpp"
#include "gqkit/region.hpp"

using namespace gqkit;

TEST_CASE("nli value names round-trip") {
    for (NliValue v :
         {NliValue::entailment, NliValue::contradiction, NliValue::neutral})
        REQUIRE(nli_from_name(nli_name(v)) == v);
    REQUIRE_FALSE(nli_from_name("maybe").has_value());
    REQUIRE_FALSE(nli_from_name("").has_value());
}

TEST_CASE("more-than premise entails the negated less-than hypothesis") {
    Signature sig{{"guy", "chase"}, 24};
    auto p = quant(Quantifier::more_than(5), "guy", "chase");
    auto h = negation(quant(Quantifier::less_than(4), "guy", "chase"));

    auto lab = nli_label(*p, *h, sig);
    REQUIRE(lab.value == NliValue::entailment);
    REQUIRE(lab.bound_used == 24);
    REQUIRE(lab.witness_joint.has_value());
    REQUIRE_FALSE(lab.witness_counter.has_value());
    REQUIRE(satisfies(*lab.witness_joint, *p));
    REQUIRE(satisfies(*lab.witness_joint, *h));
}

TEST_CASE("contradiction carries only a counter witness") {
    Signature sig{{"a", "b"}, 24};
    auto p = quant(Quantifier::exactly(3), "a", "b");
    auto h = quant(Quantifier::more_than(3), "a", "b");

    auto lab = nli_label(*p, *h, sig);
    REQUIRE(lab.value == NliValue::contradiction);
    REQUIRE_FALSE(lab.witness_joint.has_value());
    REQUIRE(lab.witness_counter.has_value());
    REQUIRE(satisfies(*lab.witness_counter, *p));
    REQUIRE_FALSE(satisfies(*lab.witness_counter, *h));
}

TEST_CASE("neutral carries both witnesses") {
    Signature sig{{"a", "b"}, 24};
    auto p = quant(Quantifier::some(), "a", "b");
    auto h = quant(Quantifier::all(), "a", "b");

    auto lab = nli_label(*p, *h, sig);
    REQUIRE(lab.value == NliValue::neutral);
    REQUIRE(lab.witness_joint.has_value());
    REQUIRE(lab.witness_counter.has_value());
    REQUIRE(satisfies(*lab.witness_joint, *p));
    REQUIRE(satisfies(*lab.witness_joint, *h));
    REQUIRE(satisfies(*lab.witness_counter, *p));
    REQUIRE_FALSE(satisfies(*lab.witness_counter, *h));
}

TEST_CASE("unsatisfiable premise is an error, not a contradiction") {
    Signature sig{{"a", "b"}, 7};
    auto p = conjunction({quant(Quantifier::some(), "a", "b"), disjoint("a", "b")});
    auto h = quant(Quantifier::some(), "a", "b");

    try {
        nli_label(*p, *h, sig);
        FAIL("expected UnsatisfiablePremiseError");
    } catch (const UnsatisfiablePremiseError& e) {
        REQUIRE(e.bound == 7);
    }
}

TEST_CASE("undeclared sets in either side are rejected") {
    Signature sig{{"a", "b"}, 24};
    auto p = quant(Quantifier::some(), "a", "b");
    auto bad = quant(Quantifier::some(), "a", "c");
    REQUIRE_THROWS_AS(nli_label(*p, *bad, sig), UnknownSetError);
    REQUIRE_THROWS_AS(nli_label(*bad, *p, sig), UnknownSetError);
}

TEST_CASE("satisfiability returns the first model in region order") {
    Signature sig{{"guy", "chase"}, 10};
    auto f = quant(Quantifier::more_than(5), "guy", "chase");

    auto m = is_satisfiable(*f, sig);
    REQUIRE(m.has_value());
    // First vector in lexicographic order puts nothing outside the
    // intersection, and the intersection at its minimum size.
    REQUIRE(m->universe_size == 6);
    std::set<std::int64_t> expect{0, 1, 2, 3, 4, 5};
    REQUIRE(m->set_named("guy") == expect);
    REQUIRE(m->set_named("chase") == expect);
    REQUIRE(satisfies(*m, *f));
}

TEST_CASE("satisfiability is empty when nothing fits the bound") {
    Signature sig{{"a", "b"}, 24};
    auto f1 = conjunction({quant(Quantifier::all(), "a", "b"),
                           quant(Quantifier::some(), "a", "b"), disjoint("a", "b")});
    REQUIRE_FALSE(is_satisfiable(*f1, sig).has_value());

    auto f2 = quant(Quantifier::exactly(30), "a", "b");
    REQUIRE_FALSE(is_satisfiable(*f2, sig).has_value());
}

namespace {

// Re-derive a label by splitting the enumeration into slices of the
// outside-all-sets region and pooling witness existence across slices.
NliValue sliced_label(const Formula& p, const Formula& h, const Signature& sig) {
    RegionEvaluator pe(p, sig);
    RegionEvaluator he(h, sig);
    bool premise_seen = false, joint = false, counter = false;
    const std::int64_t b = sig.universe_bound;
    const std::int64_t slices[3][2] = {{0, 0}, {1, 3}, {4, b}};
    for (const auto& s : slices) {
        auto bounds = extract_bounds(p, sig, b);
        bounds.push_back({{0u}, s[0], s[1]});
        RegionEnumerator en(sig, bounds, {});
        en.run([&](const RegionVector& v) {
            if (!pe.eval(v)) return true;
            premise_seen = true;
            (he.eval(v) ? joint : counter) = true;
            return !(joint && counter);
        });
        if (joint && counter) break;
    }
    REQUIRE(premise_seen);
    if (joint && counter) return NliValue::neutral;
    return joint ? NliValue::entailment : NliValue::contradiction;
}

}  // namespace

TEST_CASE("label is stable under slicing of the outside region") {
    Signature sig{{"a", "b"}, 24};
    struct Case {
        FormulaPtr p, h;
    };
    std::vector<Case> cases;
    cases.push_back({quant(Quantifier::some(), "a", "b"),
                     quant(Quantifier::most(), "a", "b")});
    cases.push_back({quant(Quantifier::more_than(5), "a", "b"),
                     negation(quant(Quantifier::less_than(4), "a", "b"))});
    cases.push_back({quant(Quantifier::exactly(3), "a", "b"),
                     quant(Quantifier::more_than(3), "a", "b")});
    cases.push_back({conjunction({quant(Quantifier::between(2, 6), "a", "b"),
                                  subset("b", "a")}),
                     quant(Quantifier::percent(50, Cmp::gt), "a", "b")});

    for (const auto& c : cases) {
        auto direct = nli_label(*c.p, *c.h, sig);
        REQUIRE(sliced_label(*c.p, *c.h, sig) == direct.value);
    }
}

TEST_CASE("work limit propagates through labeling") {
    Signature sig{{"a", "b", "c"}, 24};
    auto p = quant(Quantifier::some(), "a", "b");
    auto h = quant(Quantifier::all(), "a", "c");
    try {
        nli_label(*p, *h, sig, EnumLimits{50});
        FAIL("expected SearchSpaceError");
    } catch (const SearchSpaceError& e) {
        REQUIRE(e.limit == 50);
    }
}
