#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "gqkit/error.hpp"

namespace gqkit {

// The eleven quantifier categories, in canonical report order.
enum class Kind {
    some,
    all,
    more_than,
    less_than,
    exactly,
    between,
    fraction,
    percent,
    most,
    few,
    each_other,
};

inline constexpr std::array<Kind, 11> all_kinds = {
    Kind::some,     Kind::all,     Kind::more_than, Kind::less_than,
    Kind::exactly,  Kind::between, Kind::fraction,  Kind::percent,
    Kind::most,     Kind::few,     Kind::each_other,
};

inline const char* kind_name(Kind k) {
    switch (k) {
        case Kind::some: return "some";
        case Kind::all: return "all";
        case Kind::more_than: return "more_than";
        case Kind::less_than: return "less_than";
        case Kind::exactly: return "exactly";
        case Kind::between: return "between";
        case Kind::fraction: return "fraction";
        case Kind::percent: return "percent";
        case Kind::most: return "most";
        case Kind::few: return "few";
        case Kind::each_other: return "each_other";
    }
    throw GqError("bad Kind value");
}

inline std::optional<Kind> kind_from_name(const std::string& s) {
    for (Kind k : all_kinds)
        if (s == kind_name(k)) return k;
    return std::nullopt;
}

// Comparator for the proportional categories (fraction, percent).
enum class Cmp { eq, gt, lt };

inline const char* cmp_name(Cmp c) {
    switch (c) {
        case Cmp::eq: return "eq";
        case Cmp::gt: return "gt";
        case Cmp::lt: return "lt";
    }
    throw GqError("bad Cmp value");
}

inline std::optional<Cmp> cmp_from_name(const std::string& s) {
    if (s == "eq") return Cmp::eq;
    if (s == "gt") return Cmp::gt;
    if (s == "lt") return Cmp::lt;
    return std::nullopt;
}

// A quantifier instance: a category plus its numeric parameters.
//   more_than/less_than/exactly: k
//   between:                     p < k (strict open interval)
//   fraction:                    p/k with k >= 1, plus cmp
//   percent:                     k in [0,100], plus cmp
// The parameter-free kinds carry nothing.
struct Quantifier {
    Kind kind = Kind::some;
    std::optional<std::int64_t> k;
    std::optional<std::int64_t> p;
    Cmp cmp = Cmp::eq;

    void validate() const {
        auto need_k = [&](bool nonneg = true) {
            if (!k) throw InvalidQuantifierError(std::string(kind_name(kind)) + " requires k");
            if (nonneg && *k < 0)
                throw InvalidQuantifierError(std::string(kind_name(kind)) + " requires k >= 0");
        };
        switch (kind) {
            case Kind::some:
            case Kind::all:
            case Kind::most:
            case Kind::few:
            case Kind::each_other:
                if (k || p)
                    throw InvalidQuantifierError(
                        std::string(kind_name(kind)) + " takes no numeric parameters");
                break;
            case Kind::more_than:
            case Kind::less_than:
            case Kind::exactly:
                need_k();
                if (p) throw InvalidQuantifierError(
                    std::string(kind_name(kind)) + " takes no p");
                break;
            case Kind::between:
                need_k();
                if (!p) throw InvalidQuantifierError("between requires p");
                if (*p < 0) throw InvalidQuantifierError("between requires p >= 0");
                if (!(*p < *k)) throw InvalidQuantifierError("between requires p < k");
                break;
            case Kind::fraction:
                need_k();
                if (*k < 1) throw InvalidQuantifierError("fraction requires k >= 1");
                if (!p) throw InvalidQuantifierError("fraction requires p");
                if (*p < 0) throw InvalidQuantifierError("fraction requires p >= 0");
                break;
            case Kind::percent:
                need_k();
                if (*k > 100) throw InvalidQuantifierError("percent requires k in [0,100]");
                if (p) throw InvalidQuantifierError("percent takes no p");
                break;
        }
    }

    static Quantifier some() { return {Kind::some, {}, {}, Cmp::eq}; }
    static Quantifier all() { return {Kind::all, {}, {}, Cmp::eq}; }
    static Quantifier more_than(std::int64_t k) { return {Kind::more_than, k, {}, Cmp::eq}; }
    static Quantifier less_than(std::int64_t k) { return {Kind::less_than, k, {}, Cmp::eq}; }
    static Quantifier exactly(std::int64_t k) { return {Kind::exactly, k, {}, Cmp::eq}; }
    static Quantifier between(std::int64_t p, std::int64_t k) {
        return {Kind::between, k, p, Cmp::eq};
    }
    static Quantifier fraction(std::int64_t p, std::int64_t k, Cmp c = Cmp::eq) {
        return {Kind::fraction, k, p, c};
    }
    static Quantifier percent(std::int64_t k, Cmp c = Cmp::eq) {
        return {Kind::percent, k, {}, c};
    }
    static Quantifier most() { return {Kind::most, {}, {}, Cmp::eq}; }
    static Quantifier few() { return {Kind::few, {}, {}, Cmp::eq}; }
    static Quantifier each_other() { return {Kind::each_other, {}, {}, Cmp::eq}; }

    bool operator==(const Quantifier&) const = default;
};

// |A\B| and |A intersect B|. By conservativity these two numbers determine
// the truth value of every category here.
struct CardinalityPair {
    std::int64_t a_only = 0;   // |A \ B|
    std::int64_t a_and_b = 0;  // |A intersect B|

    std::int64_t a_total() const { return a_only + a_and_b; }
    bool operator==(const CardinalityPair&) const = default;
};

namespace detail {
// Exact comparison of i/total against the rational p/k without division.
inline bool cmp_ratio(std::int64_t i, std::int64_t total, std::int64_t p,
                      std::int64_t k, Cmp cmp) {
    __int128 lhs = static_cast<__int128>(i) * k;
    __int128 rhs = static_cast<__int128>(p) * total;
    switch (cmp) {
        case Cmp::eq: return lhs == rhs;
        case Cmp::gt: return lhs > rhs;
        case Cmp::lt: return lhs < rhs;
    }
    return false;
}
}  // namespace detail

inline bool eval_cardinalities(const Quantifier& q, CardinalityPair c) {
    q.validate();
    if (c.a_only < 0 || c.a_and_b < 0)
        throw InvalidQuantifierError("cardinalities must be non-negative");
    const std::int64_t i = c.a_and_b;
    switch (q.kind) {
        case Kind::some: return i > 0;
        case Kind::all: return c.a_only == 0;
        case Kind::more_than: return i > *q.k;
        case Kind::less_than: return i < *q.k;
        case Kind::exactly: return i == *q.k;
        case Kind::between: return *q.p < i && i < *q.k;
        case Kind::fraction: return detail::cmp_ratio(i, c.a_total(), *q.p, *q.k, q.cmp);
        case Kind::percent: return detail::cmp_ratio(i, c.a_total(), *q.k, 100, q.cmp);
        case Kind::most: return i > c.a_only;
        case Kind::few: return i < c.a_only;
        // Reciprocal reading: the relation is non-degenerate on A. A single
        // participant cannot stand in a reciprocal relation.
        case Kind::each_other: return i != 1;
    }
    throw GqError("bad Kind value");
}

}  // namespace gqkit
