#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gqkit {

// Result of reading a numeral expression. Plain values leave denominator
// empty; slash fractions like "20/20" fill both halves.
struct NumeralValue {
    std::int64_t value = 0;
    std::optional<std::int64_t> denominator;

    bool operator==(const NumeralValue&) const = default;
};

namespace detail {

inline const std::map<std::string, std::int64_t>& number_units() {
    static const std::map<std::string, std::int64_t> m = {
        {"zero", 0},     {"a", 1},        {"an", 1},       {"one", 1},
        {"two", 2},      {"three", 3},    {"four", 4},     {"five", 5},
        {"six", 6},      {"seven", 7},    {"eight", 8},    {"nine", 9},
        {"ten", 10},     {"eleven", 11},  {"twelve", 12},  {"thirteen", 13},
        {"fourteen", 14},{"fifteen", 15}, {"sixteen", 16}, {"seventeen", 17},
        {"eighteen", 18},{"nineteen", 19},{"twenty", 20},  {"thirty", 30},
        {"forty", 40},   {"fifty", 50},   {"sixty", 60},   {"seventy", 70},
        {"eighty", 80},  {"ninety", 90},
    };
    return m;
}

inline std::optional<std::int64_t> digits_value(std::string_view s) {
    // Digits with optional comma grouping: "1,000". Nothing else.
    std::string clean;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            clean += c;
        } else if (c == ',' && i > 0 && i + 1 < s.size()) {
            continue;
        } else {
            return std::nullopt;
        }
    }
    if (clean.empty() || clean.size() > 15) return std::nullopt;
    return std::stoll(clean);
}

inline std::vector<std::string> word_split(std::string_view s) {
    std::vector<std::string> words;
    std::string cur;
    for (char c : s) {
        if (c == ' ' || c == '-') {
            if (!cur.empty()) words.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
    }
    if (!cur.empty()) words.push_back(std::move(cur));
    return words;
}

}  // namespace detail

// Reads digit strings ("6", "1,000", "20%"), slash fractions ("20/20"), and
// English number words up to the millions ("ten thousand", "twenty-one").
// Anything unreadable ("umpteen") yields nullopt.
inline std::optional<NumeralValue> parse_numeral(std::string_view raw) {
    // trim
    while (!raw.empty() && (raw.front() == ' ' || raw.front() == '\t')) raw.remove_prefix(1);
    while (!raw.empty() && (raw.back() == ' ' || raw.back() == '\t')) raw.remove_suffix(1);
    if (raw.empty()) return std::nullopt;

    if (raw.back() == '%') {
        auto v = detail::digits_value(raw.substr(0, raw.size() - 1));
        if (!v) return std::nullopt;
        return NumeralValue{*v, std::nullopt};
    }

    if (std::size_t slash = raw.find('/'); slash != std::string_view::npos) {
        auto num = detail::digits_value(raw.substr(0, slash));
        auto den = detail::digits_value(raw.substr(slash + 1));
        if (!num || !den) return std::nullopt;
        return NumeralValue{*num, *den};
    }

    if (auto v = detail::digits_value(raw)) return NumeralValue{*v, std::nullopt};

    // Number words: accumulate units/tens, scale on hundred/thousand/million.
    auto words = detail::word_split(raw);
    if (words.empty()) return std::nullopt;
    const auto& units = detail::number_units();
    std::int64_t total = 0, cur = 0;
    bool any = false;
    for (const auto& w : words) {
        if (auto it = units.find(w); it != units.end()) {
            cur += it->second;
            any = true;
        } else if (auto dv = detail::digits_value(w)) {
            cur += *dv;  // mixed forms: "100 million"
            any = true;
        } else if (w == "hundred") {
            cur = (cur == 0 ? 1 : cur) * 100;
            any = true;
        } else if (w == "thousand") {
            total += (cur == 0 ? 1 : cur) * 1000;
            cur = 0;
            any = true;
        } else if (w == "million") {
            total += (cur == 0 ? 1 : cur) * 1'000'000;
            cur = 0;
            any = true;
        } else if (w == "and") {
            continue;  // "one hundred and five"
        } else {
            return std::nullopt;
        }
    }
    if (!any) return std::nullopt;
    return NumeralValue{total + cur, std::nullopt};
}

}  // namespace gqkit
