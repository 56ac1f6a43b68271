#pragma once

#include <cctype>
#include <cstdint>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gqkit/error.hpp"

namespace gqkit {

struct Token {
    int index = 0;  // 1-based position within the sentence
    std::string surface;
    std::string lemma;
    std::string upos;
    int head = 0;
    std::string deprel;

    bool operator==(const Token&) const = default;
};

// Which side of an NLI pair (or other corpus slot) a sentence annotates.
enum class SourceField { premise, hypothesis, question, context, plain };

inline const char* field_name(SourceField f) {
    switch (f) {
        case SourceField::premise: return "premise";
        case SourceField::hypothesis: return "hypothesis";
        case SourceField::question: return "question";
        case SourceField::context: return "context";
        case SourceField::plain: return "plain";
    }
    throw GqError("bad SourceField");
}

inline std::optional<SourceField> field_from_name(const std::string& s) {
    if (s == "premise") return SourceField::premise;
    if (s == "hypothesis") return SourceField::hypothesis;
    if (s == "question") return SourceField::question;
    if (s == "context") return SourceField::context;
    if (s == "plain") return SourceField::plain;
    return std::nullopt;
}

struct Sentence {
    std::string uid;
    SourceField field = SourceField::plain;
    std::vector<Token> tokens;

    bool operator==(const Sentence&) const = default;
};

namespace detail {

inline std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            cols.push_back(line.substr(start));
            break;
        }
        cols.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return cols;
}

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Multiword ranges ("4-5") and empty nodes ("5.1") carry no tree structure of
// their own; the plain integer lines that follow cover them.
inline bool skippable_id(const std::string& id) {
    return id.find('-') != std::string::npos || id.find('.') != std::string::npos;
}

inline bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace detail

// Parses 10-column CoNLL-U. Honors "# sent_id = ..." as the sentence uid and
// the extension comment "# field = premise|hypothesis|question|context|plain".
// Structural problems throw ParseError with the offending line number.
inline std::vector<Sentence> parse_conllu(std::istream& in) {
    std::vector<Sentence> out;
    Sentence cur;
    std::size_t line_no = 0;

    auto flush = [&](std::size_t at) {
        if (!cur.tokens.empty()) {
            for (std::size_t i = 0; i < cur.tokens.size(); ++i)
                if (cur.tokens[i].index != static_cast<int>(i) + 1)
                    throw ParseError("token ids not contiguous from 1", at);
            out.push_back(std::move(cur));
        }
        cur = Sentence{};
    };

    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            flush(line_no);
            continue;
        }
        if (line[0] == '#') {
            std::string body = line.substr(1);
            std::size_t eq = body.find('=');
            if (eq != std::string::npos) {
                std::string key = detail::trim(body.substr(0, eq));
                std::string val = detail::trim(body.substr(eq + 1));
                if (key == "sent_id") cur.uid = val;
                if (key == "field") {
                    auto f = field_from_name(val);
                    if (!f) throw ParseError("unknown field comment: " + val, line_no);
                    cur.field = *f;
                }
            }
            continue;
        }
        auto cols = detail::split_tabs(line);
        if (cols.size() != 10)
            throw ParseError("expected 10 tab-separated columns, got " +
                                 std::to_string(cols.size()),
                             line_no);
        if (detail::skippable_id(cols[0])) continue;
        if (!detail::all_digits(cols[0]))
            throw ParseError("bad token id: " + cols[0], line_no);
        if (!detail::all_digits(cols[6]))
            throw ParseError("bad head: " + cols[6], line_no);
        Token t;
        t.index = std::stoi(cols[0]);
        t.surface = cols[1];
        t.lemma = cols[2];
        t.upos = cols[3];
        t.head = std::stoi(cols[6]);
        t.deprel = cols[7];
        if (t.lemma.empty() || t.deprel.empty())
            throw ParseError("empty lemma or deprel", line_no);
        cur.tokens.push_back(std::move(t));
    }
    flush(line_no + 1);
    return out;
}

inline std::vector<Sentence> parse_conllu(const std::string& text) {
    std::istringstream in(text);
    return parse_conllu(in);
}

// ---------------------------------------------------------------------------
// The "lemma/deprel" serialization the detector matches against.

namespace detail {
inline std::string lower_ascii(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}
}  // namespace detail

struct SerializedSentence {
    std::string text;
    // Half-open character range of each token within text, in token order.
    std::vector<std::pair<std::size_t, std::size_t>> token_spans;
};

// Tokens render as lemma/deprel, space-joined. Lemmas are lowercased except
// for proper nouns, whose capitalization is meaningful.
inline SerializedSentence serialize_with_spans(const Sentence& s) {
    SerializedSentence out;
    for (const auto& t : s.tokens) {
        if (!out.text.empty()) out.text += ' ';
        std::size_t begin = out.text.size();
        out.text += (t.upos == "PROPN") ? t.lemma : detail::lower_ascii(t.lemma);
        out.text += '/';
        out.text += t.deprel;
        out.token_spans.emplace_back(begin, out.text.size());
    }
    return out;
}

inline std::string serialize_tokens(const Sentence& s) { return serialize_with_spans(s).text; }

}  // namespace gqkit
