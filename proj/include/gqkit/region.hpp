#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "gqkit/error.hpp"
#include "gqkit/formula.hpp"

namespace gqkit {

// A region vector compresses a model class: counts[m] is the number of
// elements belonging to exactly the sets whose bit is set in mask m
// (bit i of m <=> membership in signature set i). By quantitativity the
// formulas here cannot tell apart models with equal region vectors.
struct RegionVector {
    std::vector<std::int64_t> counts;

    std::int64_t total() const {
        std::int64_t t = 0;
        for (auto c : counts) t += c;
        return t;
    }

    bool operator==(const RegionVector&) const = default;
};

inline std::size_t region_count(const Signature& sig) {
    sig.validate();
    if (sig.set_names.size() > 16)
        throw FormulaError("too many sets in signature (max 16)");
    return std::size_t{1} << sig.set_names.size();
}

namespace detail {
inline bool mask_in_set(std::uint32_t mask, const SetExpr& e, const Signature& sig) {
    switch (e.op) {
        case SetOp::name:
            return mask >> sig.index_of(e.name) & 1u;
        case SetOp::intersect:
            for (const auto& a : e.args)
                if (!mask_in_set(mask, a, sig)) return false;
            return true;
        case SetOp::unite:
            for (const auto& a : e.args)
                if (mask_in_set(mask, a, sig)) return true;
            return false;
        case SetOp::diff:
            return mask_in_set(mask, e.args[0], sig) && !mask_in_set(mask, e.args[1], sig);
    }
    throw FormulaError("bad SetOp");
}
}  // namespace detail

// Masks whose region lies inside the given set expression.
inline std::vector<std::uint32_t> region_masks(const SetExpr& e, const Signature& sig) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t m = 0; m < region_count(sig); ++m)
        if (detail::mask_in_set(m, e, sig)) out.push_back(m);
    return out;
}

inline std::int64_t sum_regions(const RegionVector& v, const std::vector<std::uint32_t>& masks) {
    std::int64_t t = 0;
    for (auto m : masks) t += v.counts[m];
    return t;
}

// ---------------------------------------------------------------------------
// Formula evaluation directly over region vectors.

class RegionEvaluator {
  public:
    RegionEvaluator(const Formula& f, const Signature& sig) : regions_(region_count(sig)) {
        check_declared(f, sig);
        root_ = compile(f, sig);
    }

    bool eval(const RegionVector& v) const {
        if (v.counts.size() != regions_)
            throw FormulaError("region vector has wrong arity");
        return eval_node(*root_, v);
    }

  private:
    struct Node;
    using NodePtr = std::unique_ptr<Node>;

    struct QuantN {
        Quantifier q;
        std::vector<std::uint32_t> inter, only;
    };
    struct NotN {
        NodePtr child;
    };
    struct AndN {
        std::vector<NodePtr> children;
    };
    struct OrN {
        std::vector<NodePtr> children;
    };
    struct CardN {
        std::vector<std::uint32_t> masks;
        CardOp op;
        std::int64_t value;
    };
    struct ZeroN {  // subset / disjoint: the listed regions must be empty
        std::vector<std::uint32_t> masks;
    };
    using NodeVar = std::variant<QuantN, NotN, AndN, OrN, CardN, ZeroN>;
    struct Node : NodeVar {
        using NodeVar::NodeVar;
    };

    std::size_t regions_;
    NodePtr root_;

    NodePtr compile(const Formula& f, const Signature& sig) {
        return std::visit(
            [&](const auto& n) -> NodePtr {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, QuantAtom>) {
                    n.q.validate();
                    auto a = SetExpr::named(n.restrictor);
                    auto b = SetExpr::named(n.scope);
                    return std::make_unique<Node>(
                        QuantN{n.q, region_masks(SetExpr::intersect({a, b}), sig),
                               region_masks(SetExpr::diff(a, b), sig)});
                } else if constexpr (std::is_same_v<T, NotNode>) {
                    return std::make_unique<Node>(NotN{compile(*n.child, sig)});
                } else if constexpr (std::is_same_v<T, AndNode>) {
                    AndN out;
                    for (const auto& c : n.children) out.children.push_back(compile(*c, sig));
                    return std::make_unique<Node>(std::move(out));
                } else if constexpr (std::is_same_v<T, OrNode>) {
                    OrN out;
                    for (const auto& c : n.children) out.children.push_back(compile(*c, sig));
                    return std::make_unique<Node>(std::move(out));
                } else if constexpr (std::is_same_v<T, CardConstraint>) {
                    return std::make_unique<Node>(
                        CardN{region_masks(n.set, sig), n.op, n.value});
                } else if constexpr (std::is_same_v<T, SubsetAtom>) {
                    return std::make_unique<Node>(ZeroN{region_masks(
                        SetExpr::diff(SetExpr::named(n.sub), SetExpr::named(n.super)), sig)});
                } else if constexpr (std::is_same_v<T, DisjointAtom>) {
                    return std::make_unique<Node>(ZeroN{region_masks(
                        SetExpr::intersect({SetExpr::named(n.left), SetExpr::named(n.right)}),
                        sig)});
                }
            },
            f.node);
    }

    static bool eval_node(const Node& node, const RegionVector& v) {
        return std::visit(
            [&](const auto& n) -> bool {
                return eval_one(n, v);
            },
            static_cast<const NodeVar&>(node));
    }

    template <typename N>
    static bool eval_one(const N& n, const RegionVector& v) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, QuantN>) {
            return eval_cardinalities(n.q, {sum_regions(v, n.only), sum_regions(v, n.inter)});
        } else if constexpr (std::is_same_v<T, NotN>) {
            return !eval_node(*n.child, v);
        } else if constexpr (std::is_same_v<T, AndN>) {
            for (const auto& c : n.children)
                if (!eval_node(*c, v)) return false;
            return true;
        } else if constexpr (std::is_same_v<T, OrN>) {
            for (const auto& c : n.children)
                if (eval_node(*c, v)) return true;
            return false;
        } else if constexpr (std::is_same_v<T, CardN>) {
            std::int64_t s = sum_regions(v, n.masks);
            switch (n.op) {
                case CardOp::eq: return s == n.value;
                case CardOp::le: return s <= n.value;
                case CardOp::ge: return s >= n.value;
            }
            return false;
        } else {
            static_assert(std::is_same_v<T, ZeroN>);
            return sum_regions(v, n.masks) == 0;
        }
    }
};

inline bool satisfies_region(const RegionVector& v, const Formula& f, const Signature& sig) {
    return RegionEvaluator(f, sig).eval(v);
}

// Expand a region vector back into a concrete model. Element ids are dealt
// out region by region in mask order, so the expansion is deterministic.
inline FiniteModel materialize(const RegionVector& v, const Signature& sig) {
    if (v.counts.size() != region_count(sig))
        throw FormulaError("region vector has wrong arity");
    FiniteModel m;
    for (const auto& name : sig.set_names) m.sets[name];
    std::int64_t next = 0;
    for (std::uint32_t mask = 0; mask < v.counts.size(); ++mask) {
        if (v.counts[mask] < 0) throw FormulaError("negative region count");
        for (std::int64_t i = 0; i < v.counts[mask]; ++i, ++next)
            for (std::size_t bit = 0; bit < sig.set_names.size(); ++bit)
                if (mask >> bit & 1u) m.sets[sig.set_names[bit]].insert(next);
    }
    m.universe_size = next;
    return m;
}

// ---------------------------------------------------------------------------
// Bounded enumeration of region vectors, with sound pruning extracted from a
// required conjunction.

struct EnumLimits {
    std::int64_t work_limit = 0;  // 0: take the default / environment override

    std::int64_t effective() const {
        if (work_limit > 0) return work_limit;
        if (const char* env = std::getenv("GQKIT_WORK_LIMIT")) {
            char* end = nullptr;
            long long v = std::strtoll(env, &end, 10);
            if (end && *end == '\0' && v > 0) return v;
        }
        return 10'000'000;
    }
};

// sum of counts over `masks` must land in [min_sum, max_sum]
struct LinearBound {
    std::vector<std::uint32_t> masks;
    std::int64_t min_sum = 0;
    std::int64_t max_sum = 0;
};

// Pull linear bounds out of the top-level conjunctive skeleton of f. Every
// extracted bound is implied by f, so filtering with them never drops a
// satisfying vector. Nothing is extracted below Not/Or.
inline std::vector<LinearBound> extract_bounds(const Formula& f, const Signature& sig,
                                               std::int64_t bound) {
    std::vector<LinearBound> out;
    auto walk = [&](auto&& self, const Formula& g) -> void {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, AndNode>) {
                    for (const auto& c : n.children) self(self, *c);
                } else if constexpr (std::is_same_v<T, SubsetAtom>) {
                    out.push_back({region_masks(SetExpr::diff(SetExpr::named(n.sub),
                                                              SetExpr::named(n.super)),
                                                sig),
                                   0, 0});
                } else if constexpr (std::is_same_v<T, DisjointAtom>) {
                    out.push_back({region_masks(SetExpr::intersect({SetExpr::named(n.left),
                                                                    SetExpr::named(n.right)}),
                                                sig),
                                   0, 0});
                } else if constexpr (std::is_same_v<T, CardConstraint>) {
                    auto masks = region_masks(n.set, sig);
                    switch (n.op) {
                        case CardOp::eq: out.push_back({masks, n.value, n.value}); break;
                        case CardOp::le: out.push_back({masks, 0, n.value}); break;
                        case CardOp::ge: out.push_back({masks, n.value, bound}); break;
                    }
                } else if constexpr (std::is_same_v<T, QuantAtom>) {
                    auto a = SetExpr::named(n.restrictor);
                    auto b = SetExpr::named(n.scope);
                    auto inter = region_masks(SetExpr::intersect({a, b}), sig);
                    auto only = region_masks(SetExpr::diff(a, b), sig);
                    switch (n.q.kind) {
                        case Kind::some: out.push_back({inter, 1, bound}); break;
                        case Kind::all: out.push_back({only, 0, 0}); break;
                        case Kind::more_than: out.push_back({inter, *n.q.k + 1, bound}); break;
                        case Kind::less_than: out.push_back({inter, 0, *n.q.k - 1}); break;
                        case Kind::exactly: out.push_back({inter, *n.q.k, *n.q.k}); break;
                        case Kind::between:
                            out.push_back({inter, *n.q.p + 1, *n.q.k - 1});
                            break;
                        default: break;  // proportional/relational: no linear bound
                    }
                }
            },
            g.node);
    };
    walk(walk, f);
    return out;
}

// Enumerates every region vector with total <= sig.universe_bound that meets
// all the linear bounds, in lexicographic order of the counts tuple. The
// callback returns false to stop early. Work is counted per assignment node;
// exceeding the limit throws SearchSpaceError.
class RegionEnumerator {
  public:
    RegionEnumerator(const Signature& sig, std::vector<LinearBound> bounds,
                     EnumLimits limits = {})
        : bound_(sig.universe_bound),
          regions_(region_count(sig)),
          bounds_(std::move(bounds)),
          limit_(limits.effective()) {
        at_position_.resize(regions_);
        last_position_.assign(bounds_.size(), 0);
        sums_.assign(bounds_.size(), 0);
        for (std::size_t b = 0; b < bounds_.size(); ++b) {
            for (auto m : bounds_[b].masks) {
                at_position_[m].push_back(b);
                if (m > last_position_[b]) last_position_[b] = m;
            }
            // A bound over no regions constrains the constant 0.
            if (bounds_[b].masks.empty() &&
                (bounds_[b].min_sum > 0 || bounds_[b].max_sum < 0))
                impossible_ = true;
        }
    }

    template <typename F>
    void run(F&& cb) {
        if (impossible_) return;
        RegionVector v;
        v.counts.assign(regions_, 0);
        work_ = 0;
        stopped_ = false;
        descend(0, 0, v, cb);
    }

    std::int64_t work_done() const { return work_; }

  private:
    std::int64_t bound_;
    std::size_t regions_;
    std::vector<LinearBound> bounds_;
    std::int64_t limit_;
    std::vector<std::vector<std::size_t>> at_position_;  // region -> bound indices
    std::vector<std::uint32_t> last_position_;           // bound -> last region touched
    std::vector<std::int64_t> sums_;
    std::int64_t work_ = 0;
    bool stopped_ = false;
    bool impossible_ = false;

    template <typename F>
    void descend(std::size_t pos, std::int64_t used, RegionVector& v, F&& cb) {
        if (stopped_) return;
        if (pos == regions_) {
            if (!cb(const_cast<const RegionVector&>(v))) stopped_ = true;
            return;
        }
        for (std::int64_t val = 0; val <= bound_ - used; ++val) {
            if (++work_ > limit_) throw SearchSpaceError(limit_);
            v.counts[pos] = val;
            bool ok = true;
            bool overflow = false;
            for (std::size_t b : at_position_[pos]) {
                sums_[b] += val;
                if (sums_[b] > bounds_[b].max_sum) {
                    ok = false;
                    overflow = true;
                }
                if (ok && last_position_[b] == pos && sums_[b] < bounds_[b].min_sum) ok = false;
            }
            if (ok) descend(pos + 1, used + val, v, cb);
            for (std::size_t b : at_position_[pos]) sums_[b] -= val;
            if (stopped_) break;
            // Sums only grow with val, so a max violation never recovers.
            if (overflow) break;
        }
        v.counts[pos] = 0;
    }
};

// Unconstrained enumeration, materialized. Intended for small signatures;
// the work limit still applies.
inline std::vector<RegionVector> enumerate_region_vectors(const Signature& sig,
                                                          EnumLimits limits = {}) {
    std::vector<RegionVector> out;
    RegionEnumerator en(sig, {}, limits);
    en.run([&](const RegionVector& v) {
        out.push_back(v);
        return true;
    });
    return out;
}

}  // namespace gqkit
