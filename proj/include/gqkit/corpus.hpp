#pragma once

#include <cctype>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gqkit/conllu.hpp"
#include "gqkit/detector.hpp"
#include "gqkit/error.hpp"

namespace gqkit {

// Maps corpus roles onto the JSON keys of a particular file. Roles are the
// SourceField names; most NLI files need only the defaults.
struct FieldMap {
    std::map<std::string, std::string> text_fields = {{"premise", "premise"},
                                                      {"hypothesis", "hypothesis"}};
    std::string label_key = "label";
    std::string predicted_key = "predicted_label";
    std::string uid_key = "uid";
};

struct CorpusEntry {
    std::string uid;
    std::map<std::string, std::string> texts;  // role -> raw text
    std::optional<std::string> gold_label;
    std::optional<std::string> predicted_label;
    nlohmann::json raw;  // full record, for passthrough fields
};

struct Reject {
    std::size_t line_no = 0;
    std::string reason;
    std::string raw;
};

template <typename T>
struct Loaded {
    std::vector<T> entries;
    std::vector<Reject> rejects;
};

namespace detail {
// e/E -> entailment etc.; otherwise lowercase passthrough.
inline std::string normalize_label(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (s == "e") return "entailment";
    if (s == "c") return "contradiction";
    if (s == "n") return "neutral";
    return s;
}
}  // namespace detail

// One JSON object per line. A line that fails to parse or lacks a mapped text
// field becomes a reject; loading always continues. Every non-blank input
// line lands in exactly one of the two output lists.
inline Loaded<CorpusEntry> load_pairs_jsonl(std::istream& in, const FieldMap& fm = {}) {
    Loaded<CorpusEntry> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        bool blank = true;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
        if (blank) continue;

        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            out.rejects.push_back({line_no, "not a JSON object", line});
            continue;
        }
        CorpusEntry e;
        e.raw = j;
        bool bad = false;
        for (const auto& [role, key] : fm.text_fields) {
            if (!j.contains(key) || !j[key].is_string()) {
                out.rejects.push_back({line_no, "missing text field '" + key + "'", line});
                bad = true;
                break;
            }
            e.texts[role] = j[key].get<std::string>();
        }
        if (bad) continue;
        if (j.contains(fm.uid_key) && j[fm.uid_key].is_string())
            e.uid = j[fm.uid_key].get<std::string>();
        else
            e.uid = "line-" + std::to_string(line_no);
        if (j.contains(fm.label_key) && j[fm.label_key].is_string())
            e.gold_label = detail::normalize_label(j[fm.label_key].get<std::string>());
        if (j.contains(fm.predicted_key) && j[fm.predicted_key].is_string())
            e.predicted_label =
                detail::normalize_label(j[fm.predicted_key].get<std::string>());
        out.entries.push_back(std::move(e));
    }
    return out;
}

// A corpus entry joined with its dependency annotations and rule hits,
// per role.
struct AnalyzedEntry {
    CorpusEntry entry;
    std::map<std::string, Sentence> annotated;
    std::map<std::string, std::vector<DetectionMatch>> detections;

    bool has_kind(const std::string& role, Kind k) const {
        auto it = detections.find(role);
        if (it == detections.end()) return false;
        for (const auto& m : it->second)
            if (m.kind == k) return true;
        return false;
    }
};

// Joins sentences onto entries by (uid, field) and runs detection on each
// annotated role. Entries with no matching sentence keep empty annotation
// maps; sentences with no matching entry are ignored.
inline std::vector<AnalyzedEntry> analyze_corpus(const std::vector<CorpusEntry>& entries,
                                                 const std::vector<Sentence>& sentences,
                                                 const PatternSet& ps) {
    std::map<std::pair<std::string, std::string>, const Sentence*> index;
    for (const auto& s : sentences) index[{s.uid, field_name(s.field)}] = &s;
    std::vector<AnalyzedEntry> out;
    out.reserve(entries.size());
    for (const auto& e : entries) {
        AnalyzedEntry ae;
        ae.entry = e;
        for (const auto& [role, text] : e.texts) {
            auto it = index.find({e.uid, role});
            if (it == index.end()) continue;
            ae.annotated[role] = *it->second;
            ae.detections[role] = detect(*it->second, ps);
        }
        out.push_back(std::move(ae));
    }
    return out;
}

}  // namespace gqkit
