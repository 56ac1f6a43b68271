#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <istream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "gqkit/error.hpp"
#include "gqkit/formula_json.hpp"
#include "gqkit/oracle.hpp"

namespace gqkit {

struct SlotDomain {
    enum class Type { lexeme, number };
    Type type = Type::lexeme;
    std::vector<std::string> choices;  // lexeme slots
    std::int64_t min = 0, max = 0;     // number slots
};

// A generation template. The abstract sets and the formula shapes are fixed;
// number slots feed the formulas (and may be echoed in the text), lexeme
// slots touch only the text. Labels therefore depend on number bindings
// alone, which is what makes lexeme augmentation label-safe.
struct PairTemplate {
    std::string id;
    std::string premise_text;
    std::string hypothesis_text;
    nlohmann::json premise_formula;     // formula JSON with {"slot": name} number holes
    nlohmann::json hypothesis_formula;
    Signature signature;
    std::map<std::string, SlotDomain> slots;
};

struct Bindings {
    std::map<std::string, std::string> lexemes;
    std::map<std::string, std::int64_t> numbers;
};

struct GeneratedItem {
    std::string uid;
    std::string premise;
    std::string hypothesis;
    NliValue label = NliValue::neutral;
    std::vector<Kind> categories;
    std::string template_id;
    Bindings bindings;
    std::uint64_t seed = 0;
};

namespace detail {

inline void walk_formula_slots(const nlohmann::json& j,
                               const std::function<void(const std::string&)>& fn) {
    if (j.is_object()) {
        if (j.size() == 1 && j.contains("slot") && j["slot"].is_string()) {
            fn(j["slot"].get<std::string>());
            return;
        }
        for (const auto& [k, v] : j.items()) walk_formula_slots(v, fn);
    } else if (j.is_array()) {
        for (const auto& v : j) walk_formula_slots(v, fn);
    }
}

inline nlohmann::json bind_formula_json(const nlohmann::json& j, const Bindings& b) {
    if (j.is_object()) {
        if (j.size() == 1 && j.contains("slot") && j["slot"].is_string()) {
            const std::string name = j["slot"].get<std::string>();
            auto it = b.numbers.find(name);
            if (it == b.numbers.end())
                throw TemplateError("unbound number slot '" + name + "'");
            return nlohmann::json(it->second);
        }
        nlohmann::json out = nlohmann::json::object();
        for (const auto& [k, v] : j.items()) out[k] = bind_formula_json(v, b);
        return out;
    }
    if (j.is_array()) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& v : j) out.push_back(bind_formula_json(v, b));
        return out;
    }
    return j;
}

inline std::string render_text(const std::string& text, const Bindings& b,
                               const std::string& tpl_id) {
    std::string out;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '{') {
            out += text[i];
            continue;
        }
        std::size_t close = text.find('}', i);
        if (close == std::string::npos)
            throw TemplateError("unclosed placeholder in template '" + tpl_id + "'");
        std::string name = text.substr(i + 1, close - i - 1);
        if (auto lit = b.lexemes.find(name); lit != b.lexemes.end())
            out += lit->second;
        else if (auto nit = b.numbers.find(name); nit != b.numbers.end())
            out += std::to_string(nit->second);
        else
            throw TemplateError("placeholder '{" + name + "}' names no slot in template '" +
                                tpl_id + "'");
        i = close;
    }
    return out;
}

inline void check_placeholders(const std::string& text, const PairTemplate& t) {
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '{') continue;
        std::size_t close = text.find('}', i);
        if (close == std::string::npos)
            throw TemplateError("unclosed placeholder in template '" + t.id + "'");
        std::string name = text.substr(i + 1, close - i - 1);
        if (!t.slots.count(name))
            throw TemplateError("placeholder '{" + name + "}' names no slot in template '" +
                                t.id + "'");
        i = close;
    }
}

}  // namespace detail

inline std::vector<PairTemplate> load_templates(const nlohmann::json& root) {
    const nlohmann::json* arr = nullptr;
    if (root.is_array())
        arr = &root;
    else if (root.is_object() && root.contains("templates") && root["templates"].is_array())
        arr = &root["templates"];
    else
        throw TemplateError("expected a template array (or {\"templates\": [...]})");

    std::vector<PairTemplate> out;
    std::set<std::string> ids;
    for (const auto& j : *arr) {
        if (!j.is_object()) throw TemplateError("template must be an object");
        PairTemplate t;
        for (const char* key :
             {"id", "premise", "hypothesis", "premise_formula", "hypothesis_formula",
              "signature", "slots"})
            if (!j.contains(key))
                throw TemplateError(std::string("template missing '") + key + "'");
        t.id = j["id"].get<std::string>();
        if (t.id.empty() || !ids.insert(t.id).second)
            throw TemplateError("template ids must be non-empty and unique");
        t.premise_text = j["premise"].get<std::string>();
        t.hypothesis_text = j["hypothesis"].get<std::string>();
        t.premise_formula = j["premise_formula"];
        t.hypothesis_formula = j["hypothesis_formula"];
        t.signature = parse_signature(j["signature"]);
        if (!j["slots"].is_object()) throw TemplateError("slots must be an object");
        for (const auto& [name, sj] : j["slots"].items()) {
            if (name.empty()) throw TemplateError("slot names must be non-empty");
            SlotDomain d;
            std::string type = sj.value("type", "");
            if (type == "number") {
                d.type = SlotDomain::Type::number;
                if (!sj.contains("min") || !sj.contains("max") ||
                    !sj["min"].is_number_integer() || !sj["max"].is_number_integer())
                    throw TemplateError("number slot '" + name + "' needs integer min/max");
                d.min = sj["min"].get<std::int64_t>();
                d.max = sj["max"].get<std::int64_t>();
                if (d.min > d.max)
                    throw TemplateError("number slot '" + name + "' has min > max");
            } else if (type == "lexeme") {
                d.type = SlotDomain::Type::lexeme;
                if (!sj.contains("choices") || !sj["choices"].is_array() ||
                    sj["choices"].empty())
                    throw TemplateError("lexeme slot '" + name + "' needs choices");
                for (const auto& c : sj["choices"]) {
                    if (!c.is_string() || c.get<std::string>().empty())
                        throw TemplateError("lexeme choices must be non-empty strings");
                    d.choices.push_back(c.get<std::string>());
                }
            } else {
                throw TemplateError("slot '" + name + "' has unknown type '" + type + "'");
            }
            t.slots[name] = std::move(d);
        }
        // Formula holes may only name number slots; lexemes never reach logic.
        for (const auto* fj : {&t.premise_formula, &t.hypothesis_formula})
            detail::walk_formula_slots(*fj, [&](const std::string& s) {
                auto it = t.slots.find(s);
                if (it == t.slots.end() || it->second.type != SlotDomain::Type::number)
                    throw TemplateError("formula slot '" + s +
                                        "' is not a number slot in template '" + t.id + "'");
            });
        detail::check_placeholders(t.premise_text, t);
        detail::check_placeholders(t.hypothesis_text, t);
        out.push_back(std::move(t));
    }
    if (out.empty()) throw TemplateError("no templates");
    return out;
}

inline std::vector<PairTemplate> load_templates(std::istream& in) {
    nlohmann::json root = nlohmann::json::parse(in, nullptr, false);
    if (root.is_discarded()) throw TemplateError("template file is not valid JSON");
    return load_templates(root);
}

// Instantiate one template under full bindings: bind the formulas, label the
// pair with the bounded oracle, render the text. The label is computed, never
// assumed.
inline GeneratedItem instantiate(const PairTemplate& t, const Bindings& b,
                                 EnumLimits limits = {}) {
    for (const auto& [name, dom] : t.slots) {
        if (dom.type == SlotDomain::Type::number && !b.numbers.count(name))
            throw TemplateError("missing binding for number slot '" + name + "'");
        if (dom.type == SlotDomain::Type::lexeme && !b.lexemes.count(name))
            throw TemplateError("missing binding for lexeme slot '" + name + "'");
    }
    FormulaPtr p = parse_formula(detail::bind_formula_json(t.premise_formula, b));
    FormulaPtr h = parse_formula(detail::bind_formula_json(t.hypothesis_formula, b));
    GeneratedItem item;
    item.template_id = t.id;
    item.bindings = b;
    item.premise = detail::render_text(t.premise_text, b, t.id);
    item.hypothesis = detail::render_text(t.hypothesis_text, b, t.id);
    item.label = nli_label(*p, *h, t.signature, limits).value;
    std::set<int> kinds;
    for (Kind k : collect_kinds(*p)) kinds.insert(static_cast<int>(k));
    for (Kind k : collect_kinds(*h)) kinds.insert(static_cast<int>(k));
    for (Kind k : all_kinds)
        if (kinds.count(static_cast<int>(k))) item.categories.push_back(k);
    return item;
}

// Swap lexeme slot values per the lexicon, keeping numbers (and so formulas
// and label) fixed. The label is re-derived and checked rather than copied.
// A replacement colliding with a lexeme already in the item is an error.
inline GeneratedItem augment_substitute(const GeneratedItem& item,
                                        const std::vector<PairTemplate>& templates,
                                        const std::map<std::string, std::vector<std::string>>& lexicon,
                                        std::uint64_t seed, EnumLimits limits = {}) {
    const PairTemplate* tpl = nullptr;
    for (const auto& t : templates)
        if (t.id == item.template_id) tpl = &t;
    if (!tpl) throw TemplateError("item references unknown template '" + item.template_id + "'");

    std::mt19937_64 rng(seed);
    Bindings nb = item.bindings;
    bool changed = false;
    for (auto& [slot, value] : nb.lexemes) {
        auto lit = lexicon.find(slot);
        if (lit == lexicon.end() || lit->second.empty()) continue;
        std::vector<std::string> candidates;
        for (const auto& c : lit->second)
            if (c != value) candidates.push_back(c);
        if (candidates.empty()) continue;
        std::string pick = candidates[rng() % candidates.size()];
        for (const auto& [other_slot, other_value] : item.bindings.lexemes)
            if (other_slot != slot && other_value == pick)
                throw TemplateError("substitution for slot '" + slot + "' collides with '" +
                                    other_slot + "' (both '" + pick + "')");
        value = pick;
        changed = true;
    }
    if (!changed)
        throw TemplateError("lexicon offers no substitution for item '" + item.uid + "'");

    GeneratedItem out = instantiate(*tpl, nb, limits);
    if (out.label != item.label)
        throw GqError("augmentation changed the label of '" + item.uid +
                      "'; lexeme slots must not reach the formulas");
    out.uid = item.uid + "-a" + std::to_string(seed);
    out.seed = item.seed;
    return out;
}

struct GenerateConfig {
    std::int64_t count = 0;        // number of base items
    std::uint64_t seed = 0;
    double balance_tolerance = 0.10;  // allowed relative deviation from count/3
    std::int64_t augment = 1;      // total copies per base item (1 = off)
    std::int64_t max_attempts_factor = 200;
};

namespace detail {
inline std::string histogram_string(const std::map<NliValue, std::int64_t>& h) {
    std::string s;
    for (auto v : {NliValue::entailment, NliValue::contradiction, NliValue::neutral}) {
        if (!s.empty()) s += ", ";
        auto it = h.find(v);
        s += std::string(nli_name(v)) + "=" +
             std::to_string(it == h.end() ? 0 : it->second);
    }
    return s;
}
}  // namespace detail

// Seeded rejection sampling into near-equal label buckets. Draws that fail
// (unsatisfiable premise, parameter combinations that make no valid
// quantifier) are discarded and retried; a retry budget proportional to count
// bounds the search, and exhausting it reports the achieved histogram.
inline std::vector<GeneratedItem> generate(const std::vector<PairTemplate>& templates,
                                           const GenerateConfig& cfg, EnumLimits limits = {}) {
    if (templates.empty()) throw TemplateError("no templates");
    if (cfg.count < 0) throw TemplateError("count must be >= 0");
    if (cfg.augment < 1) throw TemplateError("augment must be >= 1");
    if (cfg.count == 0) return {};

    std::map<NliValue, std::int64_t> target;
    std::int64_t base = cfg.count / 3, rem = cfg.count % 3;
    target[NliValue::entailment] = base + (rem > 0 ? 1 : 0);
    target[NliValue::contradiction] = base + (rem > 1 ? 1 : 0);
    target[NliValue::neutral] = base;

    std::mt19937_64 rng(cfg.seed);
    std::map<NliValue, std::int64_t> have;
    std::vector<GeneratedItem> items;
    std::int64_t attempts = 0;
    const std::int64_t max_attempts = cfg.count * cfg.max_attempts_factor;

    while (static_cast<std::int64_t>(items.size()) < cfg.count) {
        if (++attempts > max_attempts)
            throw BalanceError("label balance unreachable after " +
                                   std::to_string(max_attempts) + " attempts (achieved " +
                                   detail::histogram_string(have) + ", want ~" +
                                   std::to_string(cfg.count / 3) + " per label)",
                               detail::histogram_string(have));
        const PairTemplate& tpl = templates[rng() % templates.size()];
        Bindings b;
        for (const auto& [name, dom] : tpl.slots) {
            if (dom.type == SlotDomain::Type::number) {
                auto width = static_cast<std::uint64_t>(dom.max - dom.min + 1);
                b.numbers[name] = dom.min + static_cast<std::int64_t>(rng() % width);
            } else {
                b.lexemes[name] = dom.choices[rng() % dom.choices.size()];
            }
        }
        GeneratedItem item;
        try {
            item = instantiate(tpl, b, limits);
        } catch (const UnsatisfiablePremiseError&) {
            continue;
        } catch (const FormulaError&) {
            continue;  // binding produced invalid quantifier parameters
        }
        if (have[item.label] >= target[item.label]) continue;
        have[item.label] += 1;
        char buf[16];
        std::snprintf(buf, sizeof buf, "%06zu", items.size() + 1);
        item.uid = std::string("gq-") + buf;
        item.seed = cfg.seed;
        items.push_back(std::move(item));
    }

    if (cfg.augment > 1) {
        std::vector<GeneratedItem> extra;
        for (const auto& item : items) {
            const PairTemplate* tpl = nullptr;
            for (const auto& t : templates)
                if (t.id == item.template_id) tpl = &t;
            std::map<std::string, std::vector<std::string>> lexicon;
            for (const auto& [name, dom] : tpl->slots)
                if (dom.type == SlotDomain::Type::lexeme) lexicon[name] = dom.choices;
            for (std::int64_t j = 1; j < cfg.augment; ++j)
                extra.push_back(augment_substitute(item, templates, lexicon,
                                                   static_cast<std::uint64_t>(j), limits));
        }
        items.insert(items.end(), extra.begin(), extra.end());
    }

    std::sort(items.begin(), items.end(),
              [](const GeneratedItem& a, const GeneratedItem& b) { return a.uid < b.uid; });

    // Bucket targets make this unreachable for the base set, and augmentation
    // scales every label equally; keep the check as a guard on both claims.
    const double ideal = static_cast<double>(items.size()) / 3.0;
    std::map<NliValue, std::int64_t> final_counts;
    for (const auto& i : items) final_counts[i.label] += 1;
    for (auto v : {NliValue::entailment, NliValue::contradiction, NliValue::neutral}) {
        double dev = std::abs(static_cast<double>(final_counts[v]) - ideal);
        if (ideal >= 1.0 && dev > cfg.balance_tolerance * ideal + 1.0)
            throw BalanceError("generated labels are unbalanced (" +
                                   detail::histogram_string(final_counts) + ")",
                               detail::histogram_string(final_counts));
    }
    return items;
}

// ---------------------------------------------------------------------------

inline nlohmann::json item_to_json(const GeneratedItem& item) {
    nlohmann::json cats = nlohmann::json::array();
    for (Kind k : item.categories) cats.push_back(kind_name(k));
    nlohmann::json bindings{{"lexemes", item.bindings.lexemes},
                            {"numbers", item.bindings.numbers}};
    return nlohmann::json{{"uid", item.uid},
                          {"premise", item.premise},
                          {"hypothesis", item.hypothesis},
                          {"label", nli_name(item.label)},
                          {"categories", std::move(cats)},
                          {"template_id", item.template_id},
                          {"bindings", std::move(bindings)},
                          {"seed", item.seed}};
}

inline std::string items_to_jsonl(const std::vector<GeneratedItem>& items) {
    std::string out;
    for (const auto& i : items) {
        out += item_to_json(i).dump();
        out += '\n';
    }
    return out;
}

}  // namespace gqkit
