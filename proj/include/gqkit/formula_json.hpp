#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "gqkit/error.hpp"
#include "gqkit/formula.hpp"
#include "gqkit/model.hpp"
#include "gqkit/oracle.hpp"

namespace gqkit {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Set expressions.
//   {"name": "dog"} | {"intersect": [..]} | {"union": [..]} | {"diff": [l, r]}

inline SetExpr parse_set_expr(const json& j) {
    if (!j.is_object() || j.size() != 1)
        throw FormulaError("set expression must be a single-key object");
    const auto it = j.begin();
    const std::string& key = it.key();
    const json& val = it.value();
    if (key == "name") {
        if (!val.is_string()) throw FormulaError("set name must be a string");
        return SetExpr::named(val.get<std::string>());
    }
    if (key == "diff") {
        if (!val.is_array() || val.size() != 2)
            throw FormulaError("diff takes exactly two set expressions");
        return SetExpr::diff(parse_set_expr(val[0]), parse_set_expr(val[1]));
    }
    if (key == "intersect" || key == "union") {
        if (!val.is_array() || val.empty())
            throw FormulaError(key + " takes a non-empty array of set expressions");
        std::vector<SetExpr> args;
        for (const auto& a : val) args.push_back(parse_set_expr(a));
        return key == "intersect" ? SetExpr::intersect(std::move(args))
                                  : SetExpr::unite(std::move(args));
    }
    throw FormulaError("unknown set expression key: " + key);
}

inline json set_expr_to_json(const SetExpr& e) {
    switch (e.op) {
        case SetOp::name: return json{{"name", e.name}};
        case SetOp::diff:
            return json{{"diff", json::array({set_expr_to_json(e.args[0]),
                                              set_expr_to_json(e.args[1])})}};
        case SetOp::intersect:
        case SetOp::unite: {
            json arr = json::array();
            for (const auto& a : e.args) arr.push_back(set_expr_to_json(a));
            return json{{e.op == SetOp::intersect ? "intersect" : "union", std::move(arr)}};
        }
    }
    throw FormulaError("bad SetOp");
}

// ---------------------------------------------------------------------------
// Formulas. One key per node:
//   {"quant": {"kind": .., "k": .., "p": .., "cmp": .., "restrictor": .., "scope": ..}}
//   {"not": F} | {"and": [F..]} | {"or": [F..]}
//   {"card": {"set": SE, "op": "eq|le|ge", "value": n}}
//   {"subset": [sub, super]} | {"disjoint": [a, b]}

inline FormulaPtr parse_formula(const json& j) {
    if (!j.is_object() || j.size() != 1)
        throw FormulaError("formula must be a single-key object");
    const auto it = j.begin();
    const std::string& key = it.key();
    const json& val = it.value();
    try {
        if (key == "quant") {
            if (!val.is_object()) throw FormulaError("quant body must be an object");
            Quantifier q;
            if (!val.contains("kind") || !val["kind"].is_string())
                throw FormulaError("quant requires a string kind");
            auto kind = kind_from_name(val["kind"].get<std::string>());
            if (!kind) throw FormulaError("unknown quantifier kind: " +
                                          val["kind"].get<std::string>());
            q.kind = *kind;
            if (val.contains("k")) {
                if (!val["k"].is_number_integer()) throw FormulaError("k must be an integer");
                q.k = val["k"].get<std::int64_t>();
            }
            if (val.contains("p")) {
                if (!val["p"].is_number_integer()) throw FormulaError("p must be an integer");
                q.p = val["p"].get<std::int64_t>();
            }
            if (val.contains("cmp")) {
                if (!val["cmp"].is_string()) throw FormulaError("cmp must be a string");
                auto c = cmp_from_name(val["cmp"].get<std::string>());
                if (!c) throw FormulaError("unknown cmp: " + val["cmp"].get<std::string>());
                q.cmp = *c;
            }
            if (!val.contains("restrictor") || !val["restrictor"].is_string() ||
                !val.contains("scope") || !val["scope"].is_string())
                throw FormulaError("quant requires string restrictor and scope");
            return quant(q, val["restrictor"].get<std::string>(),
                         val["scope"].get<std::string>());
        }
        if (key == "not") return negation(parse_formula(val));
        if (key == "and" || key == "or") {
            if (!val.is_array() || val.empty())
                throw FormulaError(key + " takes a non-empty array");
            std::vector<FormulaPtr> children;
            for (const auto& c : val) children.push_back(parse_formula(c));
            return key == "and" ? conjunction(std::move(children))
                                : disjunction(std::move(children));
        }
        if (key == "card") {
            if (!val.is_object() || !val.contains("set") || !val.contains("op") ||
                !val.contains("value"))
                throw FormulaError("card requires set, op, value");
            if (!val["op"].is_string()) throw FormulaError("card op must be a string");
            auto op = card_op_from_name(val["op"].get<std::string>());
            if (!op) throw FormulaError("unknown card op: " + val["op"].get<std::string>());
            if (!val["value"].is_number_integer())
                throw FormulaError("card value must be an integer");
            return card(parse_set_expr(val["set"]), *op, val["value"].get<std::int64_t>());
        }
        if (key == "subset" || key == "disjoint") {
            if (!val.is_array() || val.size() != 2 || !val[0].is_string() ||
                !val[1].is_string())
                throw FormulaError(key + " takes exactly two set names");
            return key == "subset"
                       ? subset(val[0].get<std::string>(), val[1].get<std::string>())
                       : disjoint(val[0].get<std::string>(), val[1].get<std::string>());
        }
    } catch (const InvalidQuantifierError& e) {
        throw FormulaError(std::string("invalid quantifier: ") + e.what());
    }
    throw FormulaError("unknown formula key: " + key);
}

inline json formula_to_json(const Formula& f) {
    return std::visit(
        [&](const auto& n) -> json {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, QuantAtom>) {
                json q{{"kind", kind_name(n.q.kind)},
                       {"restrictor", n.restrictor},
                       {"scope", n.scope}};
                if (n.q.k) q["k"] = *n.q.k;
                if (n.q.p) q["p"] = *n.q.p;
                if (n.q.kind == Kind::fraction || n.q.kind == Kind::percent)
                    q["cmp"] = cmp_name(n.q.cmp);
                return json{{"quant", std::move(q)}};
            } else if constexpr (std::is_same_v<T, NotNode>) {
                return json{{"not", formula_to_json(*n.child)}};
            } else if constexpr (std::is_same_v<T, AndNode> || std::is_same_v<T, OrNode>) {
                json arr = json::array();
                for (const auto& c : n.children) arr.push_back(formula_to_json(*c));
                return json{{std::is_same_v<T, AndNode> ? "and" : "or", std::move(arr)}};
            } else if constexpr (std::is_same_v<T, CardConstraint>) {
                return json{{"card",
                             {{"set", set_expr_to_json(n.set)},
                              {"op", card_op_name(n.op)},
                              {"value", n.value}}}};
            } else if constexpr (std::is_same_v<T, SubsetAtom>) {
                return json{{"subset", json::array({n.sub, n.super})}};
            } else if constexpr (std::is_same_v<T, DisjointAtom>) {
                return json{{"disjoint", json::array({n.left, n.right})}};
            }
        },
        f.node);
}

// ---------------------------------------------------------------------------
// Signatures and models.

inline Signature parse_signature(const json& j) {
    if (!j.is_object() || !j.contains("sets") || !j["sets"].is_array())
        throw FormulaError("signature requires a sets array");
    Signature sig;
    sig.set_names.clear();
    for (const auto& s : j["sets"]) {
        if (!s.is_string()) throw FormulaError("signature set names must be strings");
        sig.set_names.push_back(s.get<std::string>());
    }
    if (j.contains("bound")) {
        if (!j["bound"].is_number_integer())
            throw FormulaError("signature bound must be an integer");
        sig.universe_bound = j["bound"].get<std::int64_t>();
    }
    sig.validate();
    return sig;
}

inline json signature_to_json(const Signature& sig) {
    return json{{"sets", sig.set_names}, {"bound", sig.universe_bound}};
}

inline json model_to_json(const FiniteModel& m) {
    json sets = json::object();
    for (const auto& [name, elems] : m.sets)
        sets[name] = std::vector<std::int64_t>(elems.begin(), elems.end());
    return json{{"universe_size", m.universe_size}, {"sets", std::move(sets)}};
}

inline FiniteModel parse_model(const json& j) {
    if (!j.is_object() || !j.contains("universe_size") || !j.contains("sets") ||
        !j["universe_size"].is_number_integer() || !j["sets"].is_object())
        throw FormulaError("model requires universe_size and sets");
    FiniteModel m;
    m.universe_size = j["universe_size"].get<std::int64_t>();
    for (const auto& [name, elems] : j["sets"].items()) {
        if (!elems.is_array()) throw FormulaError("model set must be an array");
        for (const auto& e : elems) {
            if (!e.is_number_integer()) throw FormulaError("model elements must be integers");
            m.sets[name].insert(e.get<std::int64_t>());
        }
    }
    m.validate();
    return m;
}

inline json nli_label_to_json(const NliLabel& l) {
    json out{{"label", nli_name(l.value)}, {"bound_used", l.bound_used}};
    out["witness_joint_model"] =
        l.witness_joint ? model_to_json(*l.witness_joint) : json(nullptr);
    out["witness_counter_model"] =
        l.witness_counter ? model_to_json(*l.witness_counter) : json(nullptr);
    return out;
}

}  // namespace gqkit
