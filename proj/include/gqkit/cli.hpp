#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gqkit/corpus.hpp"
#include "gqkit/detector.hpp"
#include "gqkit/error.hpp"
#include "gqkit/formula_json.hpp"
#include "gqkit/generator.hpp"
#include "gqkit/oracle.hpp"
#include "gqkit/patterns.hpp"
#include "gqkit/stats.hpp"

namespace gqkit {

// One line of a formula-pair file: abstract premise/hypothesis formulas over
// a shared signature, plus an optional expected label.
struct FormulaPair {
    std::string uid;
    FormulaPtr premise;
    FormulaPtr hypothesis;
    Signature signature;
    std::optional<std::string> expected_label;
};

// JSONL where each record has premise/hypothesis formula objects, a
// signature, and optionally uid and expected_label. Broken records are
// rejected, never fatal. bound_override > 0 replaces every signature's bound.
inline Loaded<FormulaPair> load_formula_pairs(std::istream& in,
                                              std::int64_t bound_override = 0) {
    Loaded<FormulaPair> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (detail::trim(line).empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            out.rejects.push_back({line_no, "not a JSON object", line});
            continue;
        }
        try {
            FormulaPair p;
            if (!j.contains("premise") || !j.contains("hypothesis") ||
                !j.contains("signature"))
                throw FormulaError("record needs premise, hypothesis, signature");
            p.premise = parse_formula(j["premise"]);
            p.hypothesis = parse_formula(j["hypothesis"]);
            p.signature = parse_signature(j["signature"]);
            if (bound_override > 0) p.signature.universe_bound = bound_override;
            check_declared(*p.premise, p.signature);
            check_declared(*p.hypothesis, p.signature);
            if (j.contains("uid") && j["uid"].is_string())
                p.uid = j["uid"].get<std::string>();
            else
                p.uid = "line-" + std::to_string(line_no);
            if (j.contains("expected_label") && j["expected_label"].is_string()) {
                std::string lbl =
                    detail::normalize_label(j["expected_label"].get<std::string>());
                if (!nli_from_name(lbl))
                    throw FormulaError("bad expected_label: " + lbl);
                p.expected_label = lbl;
            }
            out.entries.push_back(std::move(p));
        } catch (const GqError& e) {
            out.rejects.push_back({line_no, e.what(), line});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

struct RunConfig {
    std::string command;           // detect | stats | label | generate | evaluate | agreement
    std::string input;
    std::string annotations;       // CoNLL-U sidecar for stats/evaluate
    std::string output;            // file, or prefix for multi-file reports
    std::string format = "jsonl";  // stdout format where it applies: jsonl|tsv|json
    std::string patterns_path;     // empty: built-in rules
    std::string cues_path;         // empty: built-in lexicon
    std::string field;             // role for stats; empty picks a sensible default
    std::string premise_key = "premise";
    std::string hypothesis_key = "hypothesis";
    std::string label_key = "label";
    std::string predicted_key = "predicted_label";
    std::string uid_key = "uid";
    std::int64_t max_universe = 0;  // >0 overrides the signatures in the input
    std::uint64_t seed = 0;
    std::string templates_path;
    std::int64_t count = 0;
    std::int64_t augment = 1;
    double balance_tolerance = 0.10;

    std::ostream* out = &std::cout;   // results when no --output file is given
    std::ostream* diag = &std::cerr;  // summaries and reject counts
};

namespace cli_detail {

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read input file: " + path);
    return in;
}

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write output file: " + path);
    return out;
}

inline bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

inline PatternSet load_pattern_set(const RunConfig& cfg) {
    if (cfg.patterns_path.empty()) return default_patterns();
    auto in = open_input(cfg.patterns_path);
    return compile_patterns(in);
}

inline std::set<std::string> load_cue_set(const RunConfig& cfg) {
    if (cfg.cues_path.empty()) return default_negation_cues();
    auto in = open_input(cfg.cues_path);
    return load_cues(in);
}

inline FieldMap field_map(const RunConfig& cfg) {
    FieldMap fm;
    fm.text_fields = {{"premise", cfg.premise_key}, {"hypothesis", cfg.hypothesis_key}};
    fm.label_key = cfg.label_key;
    fm.predicted_key = cfg.predicted_key;
    fm.uid_key = cfg.uid_key;
    return fm;
}

inline void write_rejects(const std::string& prefix, const std::vector<Reject>& rejects) {
    auto out = open_output(prefix + ".rejects.jsonl");
    for (const auto& r : rejects) {
        nlohmann::json j{{"line", r.line_no}, {"reason", r.reason}, {"raw", r.raw}};
        out << j.dump() << "\n";
    }
}

inline nlohmann::json detection_to_json(const std::string& uid, const std::string& field,
                                        const DetectionMatch& m) {
    nlohmann::json j{{"uid", uid},
                     {"field", field},
                     {"kind", kind_name(m.kind)},
                     {"char_span", {m.char_span.first, m.char_span.second}},
                     {"token_span", {m.token_span.first, m.token_span.second}}};
    if (m.raw_numeral) j["raw_numeral"] = *m.raw_numeral;
    if (m.parsed_k) j["parsed_k"] = *m.parsed_k;
    if (m.parsed_p) j["parsed_p"] = *m.parsed_p;
    return j;
}

// Sentences standing alone (no JSONL corpus): each one is its own entry.
inline std::vector<AnalyzedEntry> entries_from_sentences(const std::vector<Sentence>& sents,
                                                         const PatternSet& ps) {
    std::vector<AnalyzedEntry> out;
    int anon = 0;
    for (const auto& s : sents) {
        AnalyzedEntry ae;
        ae.entry.uid = s.uid.empty() ? "s-" + std::to_string(++anon) : s.uid;
        std::string role = field_name(s.field);
        ae.entry.texts[role] = serialize_tokens(s);
        ae.annotated[role] = s;
        ae.detections[role] = detect(s, ps);
        out.push_back(std::move(ae));
    }
    return out;
}

inline std::string counts_tsv(const CategoryCounts& c) {
    std::string out = "category\tentries\toccurrences\n";
    for (Kind k : all_kinds)
        out += std::string(kind_name(k)) + "\t" + std::to_string(c.entry_counts.at(k)) +
               "\t" + std::to_string(c.occurrence_counts.at(k)) + "\n";
    return out;
}

inline nlohmann::json counts_json(const CategoryCounts& c) {
    nlohmann::json per = nlohmann::json::object();
    for (Kind k : all_kinds)
        per[kind_name(k)] = {{"entries", c.entry_counts.at(k)},
                             {"occurrences", c.occurrence_counts.at(k)}};
    return nlohmann::json{{"total_entries", c.total_entries},
                          {"entries_with_any", c.entries_with_any},
                          {"frequency", c.frequency()},
                          {"per_category", std::move(per)}};
}

inline std::string zipf_tsv(const std::vector<ZipfRow>& rows) {
    std::string out = "category\tcount\trelative\tcumulative\n";
    for (const auto& r : rows)
        out += std::string(kind_name(r.kind)) + "\t" + std::to_string(r.count) + "\t" +
               fmt(r.relative) + "\t" + fmt(r.cumulative) + "\n";
    return out;
}

inline nlohmann::json zipf_json(const std::vector<ZipfRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows)
        arr.push_back({{"category", kind_name(r.kind)},
                       {"count", r.count},
                       {"relative", r.relative},
                       {"cumulative", r.cumulative}});
    return nlohmann::json{{"rows", std::move(arr)}};
}

inline std::string stratified_tsv(const StratifiedReport& rep) {
    std::string out = "category\tn\taccuracy\tgap\n";
    double full = rep.full.accuracy();
    for (const auto& [k, cell] : rep.per_category)
        out += std::string(kind_name(k)) + "\t" + std::to_string(cell.n) + "\t" +
               fmt(cell.accuracy()) + "\t" + fmt(full - cell.accuracy()) + "\n";
    out += "all_gqs\t" + std::to_string(rep.all_gqs.n) + "\t" + fmt(rep.all_gqs.accuracy()) +
           "\t" + fmt(full - rep.all_gqs.accuracy()) + "\n";
    out += "full\t" + std::to_string(rep.full.n) + "\t" + fmt(full) + "\t" + fmt(0.0) + "\n";
    out += "weighted\t" + std::to_string(rep.full.n) + "\t" + fmt(rep.weighted) + "\t" +
           fmt(full - rep.weighted) + "\n";
    return out;
}

inline nlohmann::json stratified_json(const StratifiedReport& rep) {
    nlohmann::json per = nlohmann::json::object();
    for (const auto& [k, cell] : rep.per_category)
        per[kind_name(k)] = {{"n", cell.n},
                             {"correct", cell.correct},
                             {"accuracy", cell.accuracy()}};
    nlohmann::json subs = nlohmann::json::array();
    for (const auto& cell : rep.per_subcorpus)
        subs.push_back({{"n", cell.n}, {"correct", cell.correct}, {"accuracy", cell.accuracy()}});
    return nlohmann::json{
        {"per_category", std::move(per)},
        {"all_gqs",
         {{"n", rep.all_gqs.n}, {"correct", rep.all_gqs.correct}, {"accuracy", rep.all_gqs.accuracy()}}},
        {"full", {{"n", rep.full.n}, {"correct", rep.full.correct}, {"accuracy", rep.full.accuracy()}}},
        {"weighted", rep.weighted},
        {"sub_corpora", std::move(subs)},
        {"skipped", rep.skipped}};
}

inline std::string side_name(const std::optional<Kind>& k) {
    return k ? kind_name(*k) : "none";
}

inline std::string pairwise_tsv(const PairwiseMatrix& m) {
    std::string out = "premise\thypothesis\tn\taccuracy\tgap\n";
    for (const auto& [key, cell] : m.cells)
        out += side_name(key.first) + "\t" + side_name(key.second) + "\t" +
               std::to_string(cell.n) + "\t" + fmt(cell.accuracy()) + "\t" +
               fmt(m.gap(cell)) + "\n";
    out += "overall\toverall\t" + std::to_string(m.overall.n) + "\t" +
           fmt(m.overall.accuracy()) + "\t" + fmt(0.0) + "\n";
    return out;
}

inline nlohmann::json pairwise_json(const PairwiseMatrix& m) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& [key, cell] : m.cells)
        cells.push_back({{"premise", side_name(key.first)},
                         {"hypothesis", side_name(key.second)},
                         {"n", cell.n},
                         {"correct", cell.correct},
                         {"accuracy", cell.accuracy()},
                         {"gap", m.gap(cell)}});
    return nlohmann::json{{"overall",
                           {{"n", m.overall.n},
                            {"correct", m.overall.correct},
                            {"accuracy", m.overall.accuracy()}}},
                          {"cells", std::move(cells)}};
}

// ---------------------------------------------------------------------------

inline void run_detect(const RunConfig& cfg) {
    if (cfg.input.empty()) throw UsageError("detect requires --input <file.conllu>");
    if (cfg.format != "jsonl") throw UsageError("detect only writes jsonl");
    PatternSet ps = load_pattern_set(cfg);
    auto in = open_input(cfg.input);
    auto sentences = parse_conllu(in);
    std::string buf;
    std::size_t n_matches = 0;
    int anon = 0;
    for (const auto& s : sentences) {
        std::string uid = s.uid.empty() ? "s-" + std::to_string(++anon) : s.uid;
        for (const auto& m : detect(s, ps)) {
            buf += detection_to_json(uid, field_name(s.field), m).dump();
            buf += '\n';
            ++n_matches;
        }
    }
    if (cfg.output.empty())
        *cfg.out << buf;
    else
        open_output(cfg.output) << buf;
    *cfg.diag << "detect: " << sentences.size() << " sentences, " << n_matches
              << " matches\n";
}

inline std::vector<AnalyzedEntry> load_analyzed(const RunConfig& cfg, const PatternSet& ps,
                                                std::vector<Reject>& rejects) {
    if (ends_with(cfg.input, ".conllu")) {
        auto in = open_input(cfg.input);
        return entries_from_sentences(parse_conllu(in), ps);
    }
    auto in = open_input(cfg.input);
    auto loaded = load_pairs_jsonl(in, field_map(cfg));
    rejects = std::move(loaded.rejects);
    std::vector<Sentence> sentences;
    if (!cfg.annotations.empty()) {
        auto ann = open_input(cfg.annotations);
        sentences = parse_conllu(ann);
    }
    return analyze_corpus(loaded.entries, sentences, ps);
}

inline void run_stats(const RunConfig& cfg) {
    if (cfg.input.empty()) throw UsageError("stats requires --input <file>");
    if (cfg.output.empty()) throw UsageError("stats requires --output <prefix>");
    PatternSet ps = load_pattern_set(cfg);
    std::vector<Reject> rejects;
    auto corpus = load_analyzed(cfg, ps, rejects);
    std::string field = cfg.field;
    if (field.empty()) field = ends_with(cfg.input, ".conllu") ? "plain" : "hypothesis";

    CategoryCounts counts = count_categories(corpus, field);
    open_output(cfg.output + ".counts.tsv") << counts_tsv(counts);
    open_output(cfg.output + ".counts.json") << counts_json(counts).dump(2) << "\n";

    std::map<Kind, std::int64_t> occ;
    std::int64_t total_occ = 0;
    for (const auto& [k, c] : counts.occurrence_counts) {
        occ[k] = c;
        total_occ += c;
    }
    std::vector<ZipfRow> zipf;
    if (total_occ > 0) zipf = zipf_table(occ);
    open_output(cfg.output + ".zipf.tsv") << zipf_tsv(zipf);
    open_output(cfg.output + ".zipf.json") << zipf_json(zipf).dump(2) << "\n";

    write_rejects(cfg.output, rejects);
    *cfg.diag << "stats: " << counts.total_entries << " entries on field '" << field << "', "
              << counts.entries_with_any << " with matches, " << rejects.size()
              << " rejected\n";
}

inline void run_label(const RunConfig& cfg) {
    if (cfg.input.empty()) throw UsageError("label requires --input <pairs.jsonl>");
    if (cfg.output.empty()) throw UsageError("label requires --output <file>");
    auto in = open_input(cfg.input);
    auto loaded = load_formula_pairs(in, cfg.max_universe);
    auto out = open_output(cfg.output);
    std::size_t ok = 0, matches = 0, with_expected = 0;
    for (const auto& p : loaded.entries) {
        try {
            NliLabel l = nli_label(*p.premise, *p.hypothesis, p.signature);
            nlohmann::json j = nli_label_to_json(l);
            j["uid"] = p.uid;
            if (p.expected_label) {
                j["expected_label"] = *p.expected_label;
                bool m = *p.expected_label == nli_name(l.value);
                j["matches_expected"] = m;
                ++with_expected;
                matches += m;
            }
            out << j.dump() << "\n";
            ++ok;
        } catch (const GqError& e) {
            loaded.rejects.push_back({0, std::string("uid ") + p.uid + ": " + e.what(), ""});
        }
    }
    write_rejects(cfg.output, loaded.rejects);
    *cfg.diag << "label: " << ok << " labeled, " << loaded.rejects.size() << " rejected";
    if (with_expected > 0)
        *cfg.diag << ", " << matches << "/" << with_expected << " match expected";
    *cfg.diag << "\n";
}

inline void run_generate(const RunConfig& cfg) {
    if (cfg.templates_path.empty()) throw UsageError("generate requires --templates <file>");
    if (cfg.count <= 0) throw UsageError("generate requires --count > 0");
    auto tin = open_input(cfg.templates_path);
    auto templates = load_templates(tin);
    GenerateConfig gc;
    gc.count = cfg.count;
    gc.seed = cfg.seed;
    gc.augment = cfg.augment;
    gc.balance_tolerance = cfg.balance_tolerance;
    auto items = generate(templates, gc);
    std::string buf = items_to_jsonl(items);
    if (cfg.output.empty())
        *cfg.out << buf;
    else
        open_output(cfg.output) << buf;
    *cfg.diag << "generate: " << items.size() << " items from " << templates.size()
              << " templates (seed " << cfg.seed << ")\n";
}

inline void run_evaluate(const RunConfig& cfg) {
    if (cfg.input.empty()) throw UsageError("evaluate requires --input <pairs.jsonl>");
    if (cfg.output.empty()) throw UsageError("evaluate requires --output <prefix>");
    PatternSet ps = load_pattern_set(cfg);
    auto cues = load_cue_set(cfg);
    std::vector<Reject> rejects;
    auto corpus = load_analyzed(cfg, ps, rejects);

    StratifiedReport rep = stratified_accuracy({corpus}, "hypothesis");
    open_output(cfg.output + ".stratified.tsv") << stratified_tsv(rep);
    open_output(cfg.output + ".stratified.json") << stratified_json(rep).dump(2) << "\n";

    PairwiseMatrix pm = pairwise_matrix(corpus, "premise", "hypothesis");
    open_output(cfg.output + ".pairwise.tsv") << pairwise_tsv(pm);
    open_output(cfg.output + ".pairwise.json") << pairwise_json(pm).dump(2) << "\n";

    auto neg = negation_cooccurrence(corpus, "hypothesis", cues);
    auto nout = open_output(cfg.output + ".negation.jsonl");
    for (const auto& h : neg) {
        nlohmann::json kinds = nlohmann::json::array();
        for (Kind k : h.kinds) kinds.push_back(kind_name(k));
        nlohmann::json j{{"uid", h.uid}, {"kinds", std::move(kinds)}, {"cues", h.cues}};
        nout << j.dump() << "\n";
    }

    write_rejects(cfg.output, rejects);
    *cfg.diag << "evaluate: " << rep.full.n << " scored, accuracy " << fmt(rep.full.accuracy())
              << ", " << neg.size() << " negation co-occurrences, " << rejects.size()
              << " rejected, " << rep.skipped << " unscored\n";
}

inline void run_agreement(const RunConfig& cfg) {
    if (cfg.input.empty()) throw UsageError("agreement requires --input <ratings.csv>");
    auto in = open_input(cfg.input);
    auto ratings = load_ratings_csv(in);
    double kappa = fleiss_kappa(ratings.matrix);
    nlohmann::json j{{"kappa", kappa},
                     {"items", ratings.items.size()},
                     {"categories", ratings.matrix.empty() ? 0 : ratings.matrix[0].size()}};
    if (cfg.output.empty())
        *cfg.out << j.dump(2) << "\n";
    else
        open_output(cfg.output) << j.dump(2) << "\n";
    *cfg.diag << "agreement: kappa " << fmt(kappa) << " over " << ratings.items.size()
              << " items\n";
}

}  // namespace cli_detail

// Exit code contract: 0 success, 1 usage error, 2 data error. Individual bad
// records never abort a batch; they land in the rejects sidecar, counted on
// the diagnostics stream.
inline int run(const RunConfig& cfg) {
    try {
        if (cfg.command == "detect")
            cli_detail::run_detect(cfg);
        else if (cfg.command == "stats")
            cli_detail::run_stats(cfg);
        else if (cfg.command == "label")
            cli_detail::run_label(cfg);
        else if (cfg.command == "generate")
            cli_detail::run_generate(cfg);
        else if (cfg.command == "evaluate")
            cli_detail::run_evaluate(cfg);
        else if (cfg.command == "agreement")
            cli_detail::run_agreement(cfg);
        else
            throw UsageError("unknown command: '" + cfg.command + "'");
        return 0;
    } catch (const UsageError& e) {
        *cfg.diag << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        *cfg.diag << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace gqkit
