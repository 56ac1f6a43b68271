#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>

#include "gqkit/error.hpp"
#include "gqkit/quantifier.hpp"

namespace gqkit {

// A finite model: a universe {0, ..., universe_size-1} and named subsets.
struct FiniteModel {
    std::int64_t universe_size = 0;
    std::map<std::string, std::set<std::int64_t>> sets;

    void validate() const {
        if (universe_size < 0) throw GqError("universe_size must be >= 0");
        for (const auto& [name, elems] : sets)
            for (std::int64_t e : elems)
                if (e < 0 || e >= universe_size)
                    throw GqError("element " + std::to_string(e) + " of set '" + name +
                                  "' outside universe of size " +
                                  std::to_string(universe_size));
    }

    const std::set<std::int64_t>& set_named(const std::string& name) const {
        auto it = sets.find(name);
        if (it == sets.end()) throw UnknownSetError(name);
        return it->second;
    }

    bool operator==(const FiniteModel&) const = default;
};

inline CardinalityPair cardinalities(const FiniteModel& m, const std::string& restrictor,
                                     const std::string& scope) {
    const auto& a = m.set_named(restrictor);
    const auto& b = m.set_named(scope);
    std::int64_t both = 0;
    for (std::int64_t e : a)
        if (b.count(e)) ++both;
    return {static_cast<std::int64_t>(a.size()) - both, both};
}

inline bool eval_model(const Quantifier& q, const std::string& restrictor,
                       const std::string& scope, const FiniteModel& m) {
    m.validate();
    return eval_cardinalities(q, cardinalities(m, restrictor, scope));
}

}  // namespace gqkit
