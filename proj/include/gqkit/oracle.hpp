#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "gqkit/error.hpp"
#include "gqkit/formula.hpp"
#include "gqkit/region.hpp"

namespace gqkit {

enum class NliValue { entailment, contradiction, neutral };

inline const char* nli_name(NliValue v) {
    switch (v) {
        case NliValue::entailment: return "entailment";
        case NliValue::contradiction: return "contradiction";
        case NliValue::neutral: return "neutral";
    }
    throw GqError("bad NliValue");
}

inline std::optional<NliValue> nli_from_name(const std::string& s) {
    if (s == "entailment") return NliValue::entailment;
    if (s == "contradiction") return NliValue::contradiction;
    if (s == "neutral") return NliValue::neutral;
    return std::nullopt;
}

struct NliLabel {
    NliValue value = NliValue::neutral;
    std::int64_t bound_used = 0;
    // First premise model (in region-vector order) satisfying / falsifying the
    // hypothesis. Entailment carries only the first, contradiction only the
    // second, neutral both.
    std::optional<FiniteModel> witness_joint;
    std::optional<FiniteModel> witness_counter;
};

// Three-way bounded judgment: scan every premise model with universe size up
// to sig.universe_bound. Hypothesis true in all of them: entailment; in none:
// contradiction; otherwise neutral. A premise with no model in range is an
// error, not a contradiction.
inline NliLabel nli_label(const Formula& premise, const Formula& hypothesis,
                          const Signature& sig, EnumLimits limits = {}) {
    sig.validate();
    check_declared(premise, sig);
    check_declared(hypothesis, sig);

    RegionEvaluator pe(premise, sig);
    RegionEvaluator he(hypothesis, sig);
    RegionEnumerator en(sig, extract_bounds(premise, sig, sig.universe_bound), limits);

    std::optional<RegionVector> joint, counter;
    bool premise_seen = false;
    en.run([&](const RegionVector& v) {
        if (!pe.eval(v)) return true;
        premise_seen = true;
        if (he.eval(v)) {
            if (!joint) joint = v;
        } else {
            if (!counter) counter = v;
        }
        return !(joint && counter);
    });

    if (!premise_seen) throw UnsatisfiablePremiseError(sig.universe_bound);

    NliLabel out;
    out.bound_used = sig.universe_bound;
    if (joint && counter)
        out.value = NliValue::neutral;
    else if (joint)
        out.value = NliValue::entailment;
    else
        out.value = NliValue::contradiction;
    if (joint) out.witness_joint = materialize(*joint, sig);
    if (counter) out.witness_counter = materialize(*counter, sig);
    return out;
}

// First model of f (region-vector order) within the bound, if any.
inline std::optional<FiniteModel> is_satisfiable(const Formula& f, const Signature& sig,
                                                 EnumLimits limits = {}) {
    sig.validate();
    check_declared(f, sig);
    RegionEvaluator fe(f, sig);
    RegionEnumerator en(sig, extract_bounds(f, sig, sig.universe_bound), limits);
    std::optional<FiniteModel> out;
    en.run([&](const RegionVector& v) {
        if (!fe.eval(v)) return true;
        out = materialize(v, sig);
        return false;
    });
    return out;
}

}  // namespace gqkit
