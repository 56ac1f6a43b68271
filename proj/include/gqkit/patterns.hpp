#pragma once

#include <array>
#include <istream>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gqkit/error.hpp"
#include "gqkit/quantifier.hpp"

namespace gqkit {

struct PatternEntry {
    Kind kind = Kind::some;
    std::string source;  // as written in the file, before \/ normalization
    std::regex re;
};

struct PatternSet {
    std::vector<PatternEntry> entries;

    // Overlap resolution order within the counting family, most specific
    // first. Non-counting categories never suppress anything.
    static const std::array<Kind, 6>& counting_priority() {
        static const std::array<Kind, 6> order = {Kind::between,   Kind::fraction,
                                                  Kind::percent,   Kind::more_than,
                                                  Kind::less_than, Kind::exactly};
        return order;
    }

    static bool is_counting(Kind k) {
        for (Kind c : counting_priority())
            if (c == k) return true;
        return false;
    }

    static int priority_rank(Kind k) {
        const auto& order = counting_priority();
        for (std::size_t i = 0; i < order.size(); ++i)
            if (order[i] == k) return static_cast<int>(i);
        return -1;
    }
};

// The shipped rules (data/patterns.tsv carries the same text). The bare "k"
// rule is deliberately loose; the overlap priority keeps it from swallowing
// the more specific counting categories.
inline const char* default_pattern_source() {
    return
        "# Category detection rules over the lemma/deprel serialization.\n"
        "# One rule per line: <category><TAB><regex>. '#' starts a comment.\n"
        "# \\/ inside a rule is an escaped literal slash.\n"
        "some\t(some|several|much|many)\\/det .*\\/(nsubj|obj|obl)|(some|several|much|many)\\/nsubj|(some|several|much|many)\\/amod \\w+\\/nsubj:pass\n"
        "all\t(every|all|each)\\/det .*\\/(nsubj|obj|obl)|all\\/det:predet .*\\/(nsubj|obj|obl)|everything|everyone|everybody\n"
        "more_than\t((more|great)\\/advmod than\\/(fixed|case)|at\\/case least\\/nmod) .+\\/nummod .+\\/(nsubj|obj|obl)\n"
        "less_than\t((few|less)\\/advmod than\\/(fixed|case)|at\\/case most\\/amod) .+\\/nummod .+\\/(nsubj|obj|obl)\n"
        "exactly\t\\w+\\/nummod .+\\/(nsubj|obj|obl)\n"
        "between\tbetween\\/case \\w+\\/(nummod|nsubj|obj|obl) and\\/cc \\w+\\/conj\n"
        "fraction\t\\d+\\/\\d+\\/(nummod|nsubj|obj|obl)|half\\/nummod|third\\/(nsubj|obj|obl)|fourth\\/(nsubj|obj|obl)|fifth\\/(nsubj|obj|obl)\n"
        "percent\t\\d+\\/nummod (%|percent)\\/(nsubj|obj|obl|nmod)\n"
        "most\tmost\\/amod \\w+\\/(nsubj|obj|obl)|most\\/nsubj:pass of\\/case .+\\/nmod\n"
        "few\tfew\\/amod \\w+\\/(nsubj|obj|obl)|few\\/nsubj:pass of\\/case .+\\/nmod\n"
        "each_other\teach\\/det other\\/(nsubj|obj|obl)\n";
}

namespace detail {
inline std::string normalize_slashes(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\\' && i + 1 < s.size() && s[i + 1] == '/') {
            out += '/';
            ++i;
        } else {
            out += s[i];
        }
    }
    return out;
}
}  // namespace detail

// File format: <category>\t<regex>, '#' comments, blank lines ignored.
// Every category must be covered by at least one rule.
inline PatternSet compile_patterns(std::istream& in) {
    PatternSet ps;
    std::set<std::pair<int, std::string>> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos)
            throw PatternError("expected <category><TAB><regex> (line " +
                               std::to_string(line_no) + ")");
        std::string kind_str = line.substr(0, tab);
        std::string pattern = line.substr(tab + 1);
        auto kind = kind_from_name(kind_str);
        if (!kind)
            throw PatternError("unknown category '" + kind_str + "' (line " +
                               std::to_string(line_no) + ")");
        if (pattern.empty())
            throw PatternError("empty pattern for '" + kind_str + "' (line " +
                               std::to_string(line_no) + ")");
        if (!seen.insert({static_cast<int>(*kind), pattern}).second)
            throw PatternError("duplicate rule for '" + kind_str + "' (line " +
                               std::to_string(line_no) + ")");
        PatternEntry entry;
        entry.kind = *kind;
        entry.source = pattern;
        try {
            entry.re.assign(detail::normalize_slashes(pattern), std::regex::ECMAScript);
        } catch (const std::regex_error& e) {
            throw PatternError("bad regex for '" + kind_str + "' (line " +
                               std::to_string(line_no) + "): " + e.what());
        }
        ps.entries.push_back(std::move(entry));
    }
    for (Kind k : all_kinds) {
        bool covered = false;
        for (const auto& e : ps.entries)
            if (e.kind == k) covered = true;
        if (!covered)
            throw PatternError(std::string("no rule covers category '") + kind_name(k) + "'");
    }
    return ps;
}

inline PatternSet compile_patterns(const std::string& text) {
    std::istringstream in(text);
    return compile_patterns(in);
}

inline const PatternSet& default_patterns() {
    static const PatternSet ps = compile_patterns(std::string(default_pattern_source()));
    return ps;
}

}  // namespace gqkit
