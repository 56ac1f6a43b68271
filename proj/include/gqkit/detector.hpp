#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "gqkit/conllu.hpp"
#include "gqkit/numeral.hpp"
#include "gqkit/patterns.hpp"
#include "gqkit/quantifier.hpp"

namespace gqkit {

struct DetectionMatch {
    Kind kind = Kind::some;
    std::pair<std::size_t, std::size_t> char_span;  // half-open, into the serialization
    std::pair<int, int> token_span;                 // 1-based inclusive token indices
    std::optional<std::string> raw_numeral;
    std::optional<std::int64_t> parsed_k;
    std::optional<std::int64_t> parsed_p;

    bool operator==(const DetectionMatch&) const = default;
};

namespace detail {

struct RawHit {
    Kind kind;
    std::size_t begin, end;
};

inline bool spans_overlap(std::size_t b1, std::size_t e1, std::size_t b2, std::size_t e2) {
    return b1 < e2 && b2 < e1;
}

inline bool numeral_token(const Token& t) { return t.deprel == "nummod" || t.upos == "NUM"; }

// Maximal runs of adjacent numeral tokens within [first, last] (0-based
// indices into s.tokens), each run joined into one lemma string.
struct NumeralRun {
    std::string text;
    std::size_t first_token;  // 0-based
};

inline std::vector<NumeralRun> numeral_runs(const Sentence& s, std::size_t first,
                                            std::size_t last) {
    std::vector<NumeralRun> runs;
    std::size_t i = first;
    while (i <= last) {
        if (!numeral_token(s.tokens[i])) {
            ++i;
            continue;
        }
        NumeralRun run{s.tokens[i].lemma, i};
        std::size_t j = i + 1;
        while (j <= last && numeral_token(s.tokens[j])) {
            run.text += ' ';
            run.text += s.tokens[j].lemma;
            ++j;
        }
        runs.push_back(std::move(run));
        i = j;
    }
    return runs;
}

inline void attach_numerals(DetectionMatch& m, const Sentence& s) {
    if (!PatternSet::is_counting(m.kind)) return;
    std::size_t first = static_cast<std::size_t>(m.token_span.first) - 1;
    std::size_t last = static_cast<std::size_t>(m.token_span.second) - 1;

    if (m.kind == Kind::fraction) {
        for (std::size_t i = first; i <= last; ++i) {
            const std::string& lemma = s.tokens[i].lemma;
            if (lemma.find('/') != std::string::npos) {
                if (auto v = parse_numeral(lemma); v && v->denominator) {
                    m.raw_numeral = lemma;
                    m.parsed_p = v->value;
                    m.parsed_k = *v->denominator;
                    return;
                }
            }
            std::int64_t denom = 0;
            std::string low = lower_ascii(lemma);
            if (low == "half") denom = 2;
            if (low == "third") denom = 3;
            if (low == "fourth" || low == "quarter") denom = 4;
            if (low == "fifth") denom = 5;
            if (denom == 0) continue;
            // Numerator, when present, sits just before: "two thirds".
            std::int64_t p = 1;
            std::string raw = low;
            if (i > 0 && numeral_token(s.tokens[i - 1])) {
                std::size_t run_first = i - 1;
                while (run_first > 0 && numeral_token(s.tokens[run_first - 1])) --run_first;
                std::string ptext;
                for (std::size_t j = run_first; j < i; ++j) {
                    if (!ptext.empty()) ptext += ' ';
                    ptext += s.tokens[j].lemma;
                }
                if (auto v = parse_numeral(ptext); v && !v->denominator) {
                    p = v->value;
                    raw = ptext + " " + low;
                }
            }
            m.raw_numeral = raw;
            m.parsed_p = p;
            m.parsed_k = denom;
            return;
        }
        return;
    }

    auto runs = numeral_runs(s, first, last);
    if (runs.empty()) return;

    if (m.kind == Kind::between) {
        std::vector<std::pair<std::string, std::int64_t>> vals;
        for (const auto& r : runs) {
            if (auto v = parse_numeral(r.text); v && !v->denominator)
                vals.emplace_back(r.text, v->value);
            if (vals.size() == 2) break;
        }
        if (vals.size() == 2) {
            m.raw_numeral = vals[0].first + " and " + vals[1].first;
            m.parsed_p = vals[0].second;
            m.parsed_k = vals[1].second;
        } else if (vals.size() == 1) {
            m.raw_numeral = vals[0].first;
        }
        return;
    }

    // more_than / less_than / exactly / percent: first numeral run decides k.
    m.raw_numeral = runs[0].text;
    if (auto v = parse_numeral(runs[0].text); v && !v->denominator) m.parsed_k = v->value;
}

}  // namespace detail

// Runs every rule over the lemma/deprel serialization. All rule hits are
// reported except inside the counting family, where overlapping spans keep
// only the highest-priority category. Numeric arguments are read off the
// nummod/NUM tokens inside each kept span.
inline std::vector<DetectionMatch> detect(const Sentence& s, const PatternSet& ps) {
    auto ser = serialize_with_spans(s);
    std::vector<detail::RawHit> hits;
    for (const auto& entry : ps.entries) {
        auto begin = std::sregex_iterator(ser.text.begin(), ser.text.end(), entry.re);
        for (auto it = begin; it != std::sregex_iterator(); ++it) {
            if (it->length(0) <= 0) continue;
            hits.push_back({entry.kind, static_cast<std::size_t>(it->position(0)),
                            static_cast<std::size_t>(it->position(0) + it->length(0))});
        }
    }
    std::sort(hits.begin(), hits.end(), [](const detail::RawHit& a, const detail::RawHit& b) {
        if (a.begin != b.begin) return a.begin < b.begin;
        if (a.end != b.end) return a.end < b.end;
        return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    });
    hits.erase(std::unique(hits.begin(), hits.end(),
                           [](const detail::RawHit& a, const detail::RawHit& b) {
                               return a.kind == b.kind && a.begin == b.begin && a.end == b.end;
                           }),
               hits.end());

    std::vector<detail::RawHit> kept;
    std::vector<detail::RawHit> kept_counting;
    for (int rank = 0; rank < static_cast<int>(PatternSet::counting_priority().size());
         ++rank) {
        Kind k = PatternSet::counting_priority()[static_cast<std::size_t>(rank)];
        for (const auto& h : hits) {
            if (h.kind != k) continue;
            bool blocked = false;
            for (const auto& kc : kept_counting)
                if (detail::spans_overlap(h.begin, h.end, kc.begin, kc.end)) blocked = true;
            if (!blocked) kept_counting.push_back(h);
        }
    }
    for (const auto& h : hits)
        if (!PatternSet::is_counting(h.kind)) kept.push_back(h);
    kept.insert(kept.end(), kept_counting.begin(), kept_counting.end());
    std::sort(kept.begin(), kept.end(), [](const detail::RawHit& a, const detail::RawHit& b) {
        if (a.begin != b.begin) return a.begin < b.begin;
        if (a.end != b.end) return a.end < b.end;
        return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    });

    std::vector<DetectionMatch> out;
    for (const auto& h : kept) {
        DetectionMatch m;
        m.kind = h.kind;
        m.char_span = {h.begin, h.end};
        int first = 0, last = 0;
        for (std::size_t i = 0; i < ser.token_spans.size(); ++i) {
            auto [tb, te] = ser.token_spans[i];
            if (detail::spans_overlap(h.begin, h.end, tb, te)) {
                if (first == 0) first = static_cast<int>(i) + 1;
                last = static_cast<int>(i) + 1;
            }
        }
        m.token_span = {first, last};
        if (first > 0) detail::attach_numerals(m, s);
        out.push_back(std::move(m));
    }
    return out;
}

}  // namespace gqkit
