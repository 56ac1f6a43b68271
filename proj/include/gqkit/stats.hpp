#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gqkit/corpus.hpp"
#include "gqkit/error.hpp"
#include "gqkit/quantifier.hpp"

namespace gqkit {

// ---------------------------------------------------------------------------
// Category counts.

struct CategoryCounts {
    std::map<Kind, std::int64_t> entry_counts;       // entries with >= 1 hit of the kind
    std::map<Kind, std::int64_t> occurrence_counts;  // total hits of the kind
    std::int64_t total_entries = 0;
    std::int64_t entries_with_any = 0;

    double frequency() const {
        return total_entries == 0
                   ? 0.0
                   : static_cast<double>(entries_with_any) / static_cast<double>(total_entries);
    }
};

// Counts over one role's detections. An empty corpus is all zeros; a
// non-empty corpus in which no entry even carries the role is a caller bug.
inline CategoryCounts count_categories(const std::vector<AnalyzedEntry>& corpus,
                                       const std::string& field) {
    CategoryCounts out;
    for (Kind k : all_kinds) {
        out.entry_counts[k] = 0;
        out.occurrence_counts[k] = 0;
    }
    if (!corpus.empty()) {
        bool known = false;
        for (const auto& ae : corpus)
            if (ae.entry.texts.count(field)) known = true;
        if (!known) throw UnknownFieldError(field);
    }
    out.total_entries = static_cast<std::int64_t>(corpus.size());
    for (const auto& ae : corpus) {
        auto it = ae.detections.find(field);
        if (it == ae.detections.end() || it->second.empty()) continue;
        out.entries_with_any += 1;
        std::set<int> kinds_here;
        for (const auto& m : it->second) {
            out.occurrence_counts[m.kind] += 1;
            kinds_here.insert(static_cast<int>(m.kind));
        }
        for (int k : kinds_here) out.entry_counts[static_cast<Kind>(k)] += 1;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Rank/frequency table.

struct ZipfRow {
    Kind kind = Kind::some;
    std::int64_t count = 0;
    double relative = 0.0;
    double cumulative = 0.0;
};

// Kinds with zero count are dropped; the rest are ranked by descending count
// (ties in canonical category order), so cumulative ends at 1.
inline std::vector<ZipfRow> zipf_table(const std::map<Kind, std::int64_t>& counts) {
    std::int64_t total = 0;
    for (const auto& [k, c] : counts) {
        if (c < 0) throw DataError("negative count in frequency table");
        total += c;
    }
    if (total == 0) throw DataError("frequency table is empty");
    std::vector<ZipfRow> rows;
    for (Kind k : all_kinds) {
        auto it = counts.find(k);
        if (it == counts.end() || it->second == 0) continue;
        rows.push_back({k, it->second, 0.0, 0.0});
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const ZipfRow& a, const ZipfRow& b) { return a.count > b.count; });
    double cum = 0.0;
    for (auto& r : rows) {
        r.relative = static_cast<double>(r.count) / static_cast<double>(total);
        cum += r.relative;
        r.cumulative = cum;
    }
    if (!rows.empty()) rows.back().cumulative = 1.0;
    return rows;
}

// ---------------------------------------------------------------------------
// Accuracy reports.

struct AccCell {
    std::int64_t n = 0;
    std::int64_t correct = 0;

    double accuracy() const {
        return n == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(n);
    }
};

struct StratifiedReport {
    std::map<Kind, AccCell> per_category;  // keyed by category present on the field
    AccCell all_gqs;                       // entries with >= 1 detection on the field
    AccCell full;                          // every scored entry
    std::vector<AccCell> per_subcorpus;
    double weighted = 0.0;  // pooled accuracy over all sub-corpora
    std::int64_t skipped = 0;  // entries lacking gold or predicted label
};

// Accuracy of predicted vs gold labels, stratified by which categories the
// given role contains. With one sub-corpus, weighted equals full accuracy by
// construction; with several it is the instance-weighted pool.
inline StratifiedReport stratified_accuracy(
    const std::vector<std::vector<AnalyzedEntry>>& sub_corpora, const std::string& field) {
    StratifiedReport rep;
    for (const auto& sub : sub_corpora) {
        AccCell cell;
        for (const auto& ae : sub) {
            if (!ae.entry.gold_label || !ae.entry.predicted_label) {
                rep.skipped += 1;
                continue;
            }
            bool correct = *ae.entry.gold_label == *ae.entry.predicted_label;
            cell.n += 1;
            cell.correct += correct;
            rep.full.n += 1;
            rep.full.correct += correct;
            auto it = ae.detections.find(field);
            bool any = it != ae.detections.end() && !it->second.empty();
            if (any) {
                rep.all_gqs.n += 1;
                rep.all_gqs.correct += correct;
                std::set<int> kinds_here;
                for (const auto& m : it->second) kinds_here.insert(static_cast<int>(m.kind));
                for (int k : kinds_here) {
                    auto& c = rep.per_category[static_cast<Kind>(k)];
                    c.n += 1;
                    c.correct += correct;
                }
            }
        }
        rep.per_subcorpus.push_back(cell);
    }
    rep.weighted = rep.full.accuracy();
    return rep;
}

struct PairwiseCell {
    std::int64_t n = 0;
    std::int64_t correct = 0;

    double accuracy() const {
        return n == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(n);
    }
};

// Cell key: category present on the premise side x category present on the
// hypothesis side; nullopt marks "no detection on that side". An entry with
// several categories per side lands in every combination, so cell totals can
// exceed the entry count.
struct PairwiseMatrix {
    std::map<std::pair<std::optional<Kind>, std::optional<Kind>>, PairwiseCell> cells;
    AccCell overall;

    double gap(const PairwiseCell& c) const { return overall.accuracy() - c.accuracy(); }
};

inline PairwiseMatrix pairwise_matrix(const std::vector<AnalyzedEntry>& corpus,
                                      const std::string& premise_field,
                                      const std::string& hypothesis_field) {
    PairwiseMatrix out;
    for (const auto& ae : corpus) {
        if (!ae.entry.gold_label || !ae.entry.predicted_label) continue;
        bool correct = *ae.entry.gold_label == *ae.entry.predicted_label;
        out.overall.n += 1;
        out.overall.correct += correct;

        auto side_kinds = [&](const std::string& role) {
            std::vector<std::optional<Kind>> ks;
            auto it = ae.detections.find(role);
            if (it != ae.detections.end() && !it->second.empty()) {
                std::set<int> uniq;
                for (const auto& m : it->second) uniq.insert(static_cast<int>(m.kind));
                for (int k : uniq) ks.emplace_back(static_cast<Kind>(k));
            } else {
                ks.emplace_back(std::nullopt);
            }
            return ks;
        };
        for (const auto& pk : side_kinds(premise_field))
            for (const auto& hk : side_kinds(hypothesis_field)) {
                auto& cell = out.cells[{pk, hk}];
                cell.n += 1;
                cell.correct += correct;
            }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Negation cue co-occurrence.

inline const std::set<std::string>& default_negation_cues() {
    static const std::set<std::string> cues = {"no",      "not",    "n't",    "never",
                                               "none",    "nobody", "nothing","nowhere",
                                               "neither", "nor",    "without"};
    return cues;
}

// One cue per line, '#' comments.
inline std::set<std::string> load_cues(std::istream& in) {
    std::set<std::string> cues;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        line = detail::trim(line);
        if (line.empty() || line[0] == '#') continue;
        cues.insert(detail::lower_ascii(line));
    }
    if (cues.empty()) throw DataError("cue lexicon is empty");
    return cues;
}

struct NegationHit {
    std::string uid;
    std::vector<Kind> kinds;        // categories on the field, canonical order
    std::vector<std::string> cues;  // cues found, sorted
};

// Entries whose given role carries both a detected category and a negation
// cue lemma.
inline std::vector<NegationHit> negation_cooccurrence(const std::vector<AnalyzedEntry>& corpus,
                                                      const std::string& field,
                                                      const std::set<std::string>& cues) {
    std::vector<NegationHit> out;
    for (const auto& ae : corpus) {
        auto dit = ae.detections.find(field);
        if (dit == ae.detections.end() || dit->second.empty()) continue;
        auto ait = ae.annotated.find(field);
        if (ait == ae.annotated.end()) continue;
        std::set<std::string> found;
        for (const auto& t : ait->second.tokens) {
            std::string lemma = detail::lower_ascii(t.lemma);
            if (cues.count(lemma)) found.insert(lemma);
        }
        if (found.empty()) continue;
        NegationHit hit;
        hit.uid = ae.entry.uid;
        std::set<int> uniq;
        for (const auto& m : dit->second) uniq.insert(static_cast<int>(m.kind));
        for (Kind k : all_kinds)
            if (uniq.count(static_cast<int>(k))) hit.kinds.push_back(k);
        hit.cues.assign(found.begin(), found.end());
        out.push_back(std::move(hit));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Inter-annotator agreement.

// Fleiss' kappa over an items x categories matrix of rating counts. Every row
// must sum to the same number of raters (>= 2). Unanimous agreement on every
// item returns exactly 1.0; the chance-corrected formula is undefined there
// and anywhere expected agreement hits 1.
inline double fleiss_kappa(const std::vector<std::vector<std::int64_t>>& ratings) {
    if (ratings.empty()) throw AgreementError("ratings matrix is empty");
    const std::size_t cats = ratings[0].size();
    if (cats == 0) throw AgreementError("ratings matrix has no categories");
    std::int64_t raters = 0;
    for (const auto& row : ratings) {
        if (row.size() != cats) throw AgreementError("ragged ratings matrix");
        std::int64_t sum = 0;
        for (auto c : row) {
            if (c < 0) throw AgreementError("negative rating count");
            sum += c;
        }
        if (raters == 0)
            raters = sum;
        else if (sum != raters)
            throw AgreementError("rows disagree on the number of raters");
    }
    if (raters < 2) throw AgreementError("need at least 2 raters");

    bool unanimous = true;
    for (const auto& row : ratings) {
        bool row_unanimous = false;
        for (auto c : row)
            if (c == raters) row_unanimous = true;
        if (!row_unanimous) unanimous = false;
    }
    if (unanimous) return 1.0;

    const double n = static_cast<double>(raters);
    const double items = static_cast<double>(ratings.size());
    double p_bar = 0.0;
    std::vector<double> p_cat(cats, 0.0);
    for (const auto& row : ratings) {
        double agree = 0.0;
        for (std::size_t j = 0; j < cats; ++j) {
            agree += static_cast<double>(row[j]) * static_cast<double>(row[j] - 1);
            p_cat[j] += static_cast<double>(row[j]);
        }
        p_bar += agree / (n * (n - 1.0));
    }
    p_bar /= items;
    double p_e = 0.0;
    for (double pj : p_cat) {
        double share = pj / (items * n);
        p_e += share * share;
    }
    if (p_e >= 1.0) throw AgreementError("expected agreement is 1; kappa undefined");
    return (p_bar - p_e) / (1.0 - p_e);
}

// CSV rows: <item-id>,<count>,<count>,... A non-numeric first data row is
// treated as a header and skipped.
struct RatingsCsv {
    std::vector<std::string> items;
    std::vector<std::vector<std::int64_t>> matrix;
};

inline RatingsCsv load_ratings_csv(std::istream& in) {
    RatingsCsv out;
    std::string line;
    std::size_t line_no = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (detail::trim(line).empty()) continue;
        std::vector<std::string> cols;
        std::istringstream ss(line);
        std::string col;
        while (std::getline(ss, col, ',')) cols.push_back(detail::trim(col));
        if (cols.size() < 2) throw ParseError("ratings row needs an id and counts", line_no);
        std::vector<std::int64_t> row;
        bool numeric = true;
        for (std::size_t i = 1; i < cols.size(); ++i) {
            if (!detail::all_digits(cols[i])) {
                numeric = false;
                break;
            }
            row.push_back(std::stoll(cols[i]));
        }
        if (!numeric) {
            if (first) {
                first = false;
                continue;  // header
            }
            throw ParseError("non-numeric rating count", line_no);
        }
        first = false;
        out.items.push_back(cols[0]);
        out.matrix.push_back(std::move(row));
    }
    return out;
}

}  // namespace gqkit
