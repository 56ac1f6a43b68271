#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "gqkit/error.hpp"
#include "gqkit/model.hpp"
#include "gqkit/quantifier.hpp"

namespace gqkit {

// ---------------------------------------------------------------------------
// Set expressions: a named set or a boolean combination of them. Used by
// cardinality constraints.

enum class SetOp { name, intersect, unite, diff };

struct SetExpr {
    SetOp op = SetOp::name;
    std::string name;            // op == name
    std::vector<SetExpr> args;   // otherwise

    static SetExpr named(std::string n) { return {SetOp::name, std::move(n), {}}; }
    static SetExpr intersect(std::vector<SetExpr> a) {
        if (a.empty()) throw FormulaError("intersect needs at least one argument");
        return {SetOp::intersect, {}, std::move(a)};
    }
    static SetExpr unite(std::vector<SetExpr> a) {
        if (a.empty()) throw FormulaError("union needs at least one argument");
        return {SetOp::unite, {}, std::move(a)};
    }
    static SetExpr diff(SetExpr l, SetExpr r) {
        return {SetOp::diff, {}, {std::move(l), std::move(r)}};
    }

    bool operator==(const SetExpr&) const = default;
};

inline std::set<std::int64_t> eval_set(const SetExpr& e, const FiniteModel& m) {
    switch (e.op) {
        case SetOp::name:
            return m.set_named(e.name);
        case SetOp::intersect: {
            std::set<std::int64_t> acc = eval_set(e.args[0], m);
            for (std::size_t i = 1; i < e.args.size(); ++i) {
                std::set<std::int64_t> rhs = eval_set(e.args[i], m), out;
                std::ranges::set_intersection(acc, rhs, std::inserter(out, out.end()));
                acc = std::move(out);
            }
            return acc;
        }
        case SetOp::unite: {
            std::set<std::int64_t> acc;
            for (const auto& a : e.args) {
                auto s = eval_set(a, m);
                acc.insert(s.begin(), s.end());
            }
            return acc;
        }
        case SetOp::diff: {
            std::set<std::int64_t> l = eval_set(e.args[0], m), r = eval_set(e.args[1], m), out;
            std::ranges::set_difference(l, r, std::inserter(out, out.end()));
            return out;
        }
    }
    throw FormulaError("bad SetOp");
}

// ---------------------------------------------------------------------------
// Formulas.

enum class CardOp { eq, le, ge };

inline const char* card_op_name(CardOp o) {
    switch (o) {
        case CardOp::eq: return "eq";
        case CardOp::le: return "le";
        case CardOp::ge: return "ge";
    }
    throw FormulaError("bad CardOp");
}

inline std::optional<CardOp> card_op_from_name(const std::string& s) {
    if (s == "eq") return CardOp::eq;
    if (s == "le") return CardOp::le;
    if (s == "ge") return CardOp::ge;
    return std::nullopt;
}

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct QuantAtom {
    Quantifier q;
    std::string restrictor;
    std::string scope;
};

struct NotNode {
    FormulaPtr child;
};

struct AndNode {
    std::vector<FormulaPtr> children;
};

struct OrNode {
    std::vector<FormulaPtr> children;
};

struct CardConstraint {
    SetExpr set;
    CardOp op = CardOp::eq;
    std::int64_t value = 0;
};

struct SubsetAtom {
    std::string sub;
    std::string super;
};

struct DisjointAtom {
    std::string left;
    std::string right;
};

using FormulaNode =
    std::variant<QuantAtom, NotNode, AndNode, OrNode, CardConstraint, SubsetAtom, DisjointAtom>;

struct Formula {
    FormulaNode node;
};

inline FormulaPtr quant(Quantifier q, std::string restrictor, std::string scope) {
    q.validate();
    return std::make_shared<Formula>(
        Formula{QuantAtom{std::move(q), std::move(restrictor), std::move(scope)}});
}

inline FormulaPtr negation(FormulaPtr f) {
    if (!f) throw FormulaError("negation of null formula");
    return std::make_shared<Formula>(Formula{NotNode{std::move(f)}});
}

inline FormulaPtr conjunction(std::vector<FormulaPtr> fs) {
    if (fs.empty()) throw FormulaError("conjunction needs at least one conjunct");
    for (const auto& f : fs)
        if (!f) throw FormulaError("null conjunct");
    return std::make_shared<Formula>(Formula{AndNode{std::move(fs)}});
}

inline FormulaPtr disjunction(std::vector<FormulaPtr> fs) {
    if (fs.empty()) throw FormulaError("disjunction needs at least one disjunct");
    for (const auto& f : fs)
        if (!f) throw FormulaError("null disjunct");
    return std::make_shared<Formula>(Formula{OrNode{std::move(fs)}});
}

inline FormulaPtr card(SetExpr e, CardOp op, std::int64_t value) {
    if (value < 0) throw FormulaError("cardinality bound must be >= 0");
    return std::make_shared<Formula>(Formula{CardConstraint{std::move(e), op, value}});
}

inline FormulaPtr subset(std::string sub, std::string super) {
    return std::make_shared<Formula>(Formula{SubsetAtom{std::move(sub), std::move(super)}});
}

inline FormulaPtr disjoint(std::string a, std::string b) {
    return std::make_shared<Formula>(Formula{DisjointAtom{std::move(a), std::move(b)}});
}

// ---------------------------------------------------------------------------

inline void collect_set_names(const SetExpr& e, std::set<std::string>& out) {
    if (e.op == SetOp::name) out.insert(e.name);
    for (const auto& a : e.args) collect_set_names(a, out);
}

inline void collect_set_names(const Formula& f, std::set<std::string>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, QuantAtom>) {
                out.insert(n.restrictor);
                out.insert(n.scope);
            } else if constexpr (std::is_same_v<T, NotNode>) {
                collect_set_names(*n.child, out);
            } else if constexpr (std::is_same_v<T, AndNode> || std::is_same_v<T, OrNode>) {
                for (const auto& c : n.children) collect_set_names(*c, out);
            } else if constexpr (std::is_same_v<T, CardConstraint>) {
                collect_set_names(n.set, out);
            } else if constexpr (std::is_same_v<T, SubsetAtom>) {
                out.insert(n.sub);
                out.insert(n.super);
            } else if constexpr (std::is_same_v<T, DisjointAtom>) {
                out.insert(n.left);
                out.insert(n.right);
            }
        },
        f.node);
}

inline std::set<std::string> collect_set_names(const Formula& f) {
    std::set<std::string> out;
    collect_set_names(f, out);
    return out;
}

// Quantifier kinds mentioned anywhere in the formula, in canonical order.
inline std::vector<Kind> collect_kinds(const Formula& f) {
    std::set<int> seen;
    auto walk = [&](auto&& self, const Formula& g) -> void {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, QuantAtom>) {
                    seen.insert(static_cast<int>(n.q.kind));
                } else if constexpr (std::is_same_v<T, NotNode>) {
                    self(self, *n.child);
                } else if constexpr (std::is_same_v<T, AndNode> || std::is_same_v<T, OrNode>) {
                    for (const auto& c : n.children) self(self, *c);
                }
            },
            g.node);
    };
    walk(walk, f);
    std::vector<Kind> out;
    for (Kind k : all_kinds)
        if (seen.count(static_cast<int>(k))) out.push_back(k);
    return out;
}

// Direct model-theoretic evaluation. This is the reference semantics; the
// region-vector path in region.hpp must agree with it everywhere.
inline bool satisfies(const FiniteModel& m, const Formula& f) {
    return std::visit(
        [&](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, QuantAtom>) {
                return eval_cardinalities(n.q, cardinalities(m, n.restrictor, n.scope));
            } else if constexpr (std::is_same_v<T, NotNode>) {
                return !satisfies(m, *n.child);
            } else if constexpr (std::is_same_v<T, AndNode>) {
                return std::ranges::all_of(n.children,
                                           [&](const FormulaPtr& c) { return satisfies(m, *c); });
            } else if constexpr (std::is_same_v<T, OrNode>) {
                return std::ranges::any_of(n.children,
                                           [&](const FormulaPtr& c) { return satisfies(m, *c); });
            } else if constexpr (std::is_same_v<T, CardConstraint>) {
                auto sz = static_cast<std::int64_t>(eval_set(n.set, m).size());
                switch (n.op) {
                    case CardOp::eq: return sz == n.value;
                    case CardOp::le: return sz <= n.value;
                    case CardOp::ge: return sz >= n.value;
                }
                return false;
            } else if constexpr (std::is_same_v<T, SubsetAtom>) {
                const auto& s = m.set_named(n.sub);
                const auto& sup = m.set_named(n.super);
                return std::ranges::includes(sup, s);
            } else if constexpr (std::is_same_v<T, DisjointAtom>) {
                const auto& l = m.set_named(n.left);
                const auto& r = m.set_named(n.right);
                return std::ranges::none_of(l, [&](std::int64_t e) { return r.count(e) > 0; });
            }
        },
        f.node);
}

// ---------------------------------------------------------------------------
// A signature fixes the abstract set names a formula pair may mention and the
// universe bound for enumeration.

struct Signature {
    std::vector<std::string> set_names;
    std::int64_t universe_bound = 24;

    void validate() const {
        if (set_names.empty()) throw FormulaError("signature needs at least one set name");
        if (universe_bound < 0) throw FormulaError("universe bound must be >= 0");
        std::set<std::string> uniq(set_names.begin(), set_names.end());
        if (uniq.size() != set_names.size())
            throw FormulaError("signature set names must be unique");
        for (const auto& n : set_names)
            if (n.empty()) throw FormulaError("signature set names must be non-empty");
    }

    std::size_t index_of(const std::string& name) const {
        for (std::size_t i = 0; i < set_names.size(); ++i)
            if (set_names[i] == name) return i;
        throw UnknownSetError(name);
    }

    bool operator==(const Signature&) const = default;
};

inline void check_declared(const Formula& f, const Signature& sig) {
    std::set<std::string> declared(sig.set_names.begin(), sig.set_names.end());
    for (const auto& n : collect_set_names(f))
        if (!declared.count(n)) throw UnknownSetError(n);
}

}  // namespace gqkit
