#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gqkit/cli.hpp"
#include "test_util.hpp"

using namespace gqkit;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "gqkit-cli-tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    REQUIRE(out.good());
    out << text;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line))
        if (!line.empty()) out.push_back(line);
    return out;
}

struct CliRun {
    int rc = 0;
    std::string out;
    std::string diag;
};

CliRun run_cli(RunConfig cfg) {
    std::ostringstream out, diag;
    cfg.out = &out;
    cfg.diag = &diag;
    CliRun r;
    r.rc = run(cfg);
    r.out = out.str();
    r.diag = diag.str();
    return r;
}

}  // namespace

TEST_CASE("formula pair files load with per-line rejects") {
    std::istringstream in(R"({"uid":"ok","premise":{"quant":{"kind":"some","restrictor":"a","scope":"b"}},"hypothesis":{"quant":{"kind":"all","restrictor":"a","scope":"b"}},"signature":{"sets":["a","b"]}}
{"uid":"undeclared","premise":{"quant":{"kind":"some","restrictor":"a","scope":"z"}},"hypothesis":{"quant":{"kind":"all","restrictor":"a","scope":"b"}},"signature":{"sets":["a","b"]}}
{"uid":"badlabel","premise":{"quant":{"kind":"some","restrictor":"a","scope":"b"}},"hypothesis":{"quant":{"kind":"all","restrictor":"a","scope":"b"}},"signature":{"sets":["a","b"]},"expected_label":"maybe"}
{"premise":{"quant":{"kind":"some","restrictor":"a","scope":"b"}},"hypothesis":{"quant":{"kind":"all","restrictor":"a","scope":"b"}},"signature":{"sets":["a","b"]},"expected_label":"N"}
garbage
)");
    auto loaded = load_formula_pairs(in);
    REQUIRE(loaded.entries.size() == 2);
    REQUIRE(loaded.rejects.size() == 3);
    REQUIRE(loaded.entries[0].uid == "ok");
    REQUIRE_FALSE(loaded.entries[0].expected_label.has_value());
    REQUIRE(loaded.entries[1].uid == "line-4");
    REQUIRE(loaded.entries[1].expected_label == "neutral");
    REQUIRE(loaded.entries[1].signature.universe_bound == 24);

    std::istringstream again(
        R"({"premise":{"quant":{"kind":"some","restrictor":"a","scope":"b"}},"hypothesis":{"quant":{"kind":"all","restrictor":"a","scope":"b"}},"signature":{"sets":["a","b"],"bound":12}})");
    auto overridden = load_formula_pairs(again, 6);
    REQUIRE(overridden.entries.size() == 1);
    REQUIRE(overridden.entries[0].signature.universe_bound == 6);
}

TEST_CASE("detect streams one JSON object per match") {
    RunConfig cfg;
    cfg.command = "detect";
    cfg.input = data_path("conllu/demo_more_than.conllu");
    auto r = run_cli(cfg);
    REQUIRE(r.rc == 0);
    auto ls = lines_of(r.out);
    REQUIRE(ls.size() == 1);
    auto j = nlohmann::json::parse(ls[0]);
    REQUIRE(j["uid"] == "s3-yiddish");
    REQUIRE(j["field"] == "plain");
    REQUIRE(j["kind"] == "more_than");
    REQUIRE(j["raw_numeral"] == "thousand");
    REQUIRE(j["parsed_k"] == 1000);
    REQUIRE(j["token_span"] == nlohmann::json::array({7, 11}));
    REQUIRE_FALSE(j.contains("parsed_p"));
    REQUIRE(r.diag.find("1 matches") != std::string::npos);

    SECTION("--output writes the same stream to a file") {
        auto dir = fresh_dir("detect");
        RunConfig f = cfg;
        f.output = (dir / "matches.jsonl").string();
        auto rf = run_cli(f);
        REQUIRE(rf.rc == 0);
        REQUIRE(rf.out.empty());
        REQUIRE(slurp(f.output) == r.out);
    }
}

TEST_CASE("detect usage and data errors set the exit code") {
    RunConfig no_input;
    no_input.command = "detect";
    auto r1 = run_cli(no_input);
    REQUIRE(r1.rc == 1);
    REQUIRE(r1.diag.find("usage error:") == 0);

    RunConfig bad_format;
    bad_format.command = "detect";
    bad_format.input = data_path("conllu/demo_more_than.conllu");
    bad_format.format = "tsv";
    REQUIRE(run_cli(bad_format).rc == 1);

    RunConfig missing;
    missing.command = "detect";
    missing.input = "/nonexistent/nothing.conllu";
    auto r3 = run_cli(missing);
    REQUIRE(r3.rc == 2);
    REQUIRE(r3.diag.find("error:") == 0);

    RunConfig unknown;
    unknown.command = "frobnicate";
    REQUIRE(run_cli(unknown).rc == 1);
}

TEST_CASE("label reproduces the expected labels of the shipped pairs") {
    auto dir = fresh_dir("label-golden");
    RunConfig cfg;
    cfg.command = "label";
    cfg.input = data_path("golden_pairs.jsonl");
    cfg.output = (dir / "labels.jsonl").string();
    auto r = run_cli(cfg);
    REQUIRE(r.rc == 0);

    auto ls = lines_of(slurp(cfg.output));
    REQUIRE(ls.size() == 11);
    for (const auto& line : ls) {
        auto j = nlohmann::json::parse(line);
        REQUIRE(j["matches_expected"] == true);
        REQUIRE(j["label"] == j["expected_label"]);
        REQUIRE(j["bound_used"] == 24);
        if (j["label"] == "entailment") {
            REQUIRE_FALSE(j["witness_joint_model"].is_null());
            REQUIRE(j["witness_counter_model"].is_null());
        } else if (j["label"] == "contradiction") {
            REQUIRE(j["witness_joint_model"].is_null());
            REQUIRE_FALSE(j["witness_counter_model"].is_null());
        } else {
            REQUIRE_FALSE(j["witness_joint_model"].is_null());
            REQUIRE_FALSE(j["witness_counter_model"].is_null());
        }
    }
    REQUIRE(slurp(cfg.output + ".rejects.jsonl").empty());
    REQUIRE(r.diag.find("11 labeled, 0 rejected, 11/11 match expected") !=
            std::string::npos);
}

TEST_CASE("label rejects broken and unsatisfiable records without aborting") {
    auto dir = fresh_dir("label-mixed");
    std::string input =
        R"({"uid":"fine","premise":{"quant":{"kind":"exactly","k":3,"restrictor":"a","scope":"b"}},"hypothesis":{"quant":{"kind":"some","restrictor":"a","scope":"b"}},"signature":{"sets":["a","b"]},"expected_label":"entailment"})"
        "\n"
        "this is not json\n"
        R"({"uid":"impossible","premise":{"and":[{"quant":{"kind":"some","restrictor":"a","scope":"b"}},{"disjoint":["a","b"]}]},"hypothesis":{"quant":{"kind":"some","restrictor":"a","scope":"b"}},"signature":{"sets":["a","b"],"bound":6}})"
        "\n";
    write_file(dir / "pairs.jsonl", input);

    RunConfig cfg;
    cfg.command = "label";
    cfg.input = (dir / "pairs.jsonl").string();
    cfg.output = (dir / "labels.jsonl").string();
    auto r = run_cli(cfg);
    REQUIRE(r.rc == 0);

    auto out_lines = lines_of(slurp(cfg.output));
    REQUIRE(out_lines.size() == 1);
    REQUIRE(nlohmann::json::parse(out_lines[0])["uid"] == "fine");

    auto rejects = lines_of(slurp(cfg.output + ".rejects.jsonl"));
    REQUIRE(rejects.size() == 2);
    REQUIRE(nlohmann::json::parse(rejects[0])["line"] == 2);
    auto unsat = nlohmann::json::parse(rejects[1]);
    REQUIRE(unsat["reason"].get<std::string>().find("impossible") !=
            std::string::npos);
    REQUIRE(unsat["reason"].get<std::string>().find("unsatisfiable") !=
            std::string::npos);
}

TEST_CASE("label honors the universe override") {
    auto dir = fresh_dir("label-bound");
    std::string pair =
        R"({"uid":"p","premise":{"quant":{"kind":"more_than","k":5,"restrictor":"a","scope":"b"}},"hypothesis":{"quant":{"kind":"some","restrictor":"a","scope":"b"}},"signature":{"sets":["a","b"]}})"
        "\n";
    write_file(dir / "pairs.jsonl", pair);

    RunConfig cfg;
    cfg.command = "label";
    cfg.input = (dir / "pairs.jsonl").string();
    cfg.output = (dir / "a.jsonl").string();
    cfg.max_universe = 30;
    REQUIRE(run_cli(cfg).rc == 0);
    auto j = nlohmann::json::parse(lines_of(slurp(cfg.output))[0]);
    REQUIRE(j["bound_used"] == 30);
    REQUIRE(j["label"] == "entailment");

    // Too small a universe leaves the premise with no models at all.
    RunConfig tight = cfg;
    tight.output = (dir / "b.jsonl").string();
    tight.max_universe = 4;
    REQUIRE(run_cli(tight).rc == 0);
    REQUIRE(lines_of(slurp(tight.output)).empty());
    REQUIRE(lines_of(slurp(tight.output + ".rejects.jsonl")).size() == 1);
}

TEST_CASE("stats over annotated sentences") {
    auto dir = fresh_dir("stats-conllu");
    RunConfig cfg;
    cfg.command = "stats";
    cfg.input = data_path("conllu/category_examples.conllu");
    cfg.output = (dir / "report").string();
    auto r = run_cli(cfg);
    REQUIRE(r.rc == 0);

    auto counts = nlohmann::json::parse(slurp(cfg.output + ".counts.json"));
    REQUIRE(counts["total_entries"] == 11);
    REQUIRE(counts["entries_with_any"] == 11);
    REQUIRE(counts["frequency"] == 1.0);
    for (Kind k : all_kinds)
        REQUIRE(counts["per_category"][kind_name(k)]["entries"].get<int>() >= 1);
    REQUIRE(counts["per_category"]["exactly"]["entries"] == 3);
    REQUIRE(counts["per_category"]["all"]["entries"] == 2);

    auto counts_tsv = slurp(cfg.output + ".counts.tsv");
    REQUIRE(lines_of(counts_tsv).size() == 12);  // header + 11 categories

    auto zipf = nlohmann::json::parse(slurp(cfg.output + ".zipf.json"));
    REQUIRE(zipf["rows"].size() == 11);
    double prev = 0.0;
    for (const auto& row : zipf["rows"]) {
        REQUIRE(row["cumulative"].get<double>() >= prev);
        prev = row["cumulative"].get<double>();
    }
    REQUIRE(zipf["rows"].back()["cumulative"] == 1.0);

    REQUIRE(slurp(cfg.output + ".rejects.jsonl").empty());
    REQUIRE(r.diag.find("11 entries") != std::string::npos);
}

TEST_CASE("stats over a bare JSONL corpus writes empty rank tables") {
    auto dir = fresh_dir("stats-jsonl");
    write_file(dir / "pairs.jsonl",
               R"({"uid":"a","premise":"p","hypothesis":"h"})"
               "\n"
               R"({"uid":"b","premise":"p2","hypothesis":"h2"})"
               "\n"
               "broken\n");
    RunConfig cfg;
    cfg.command = "stats";
    cfg.input = (dir / "pairs.jsonl").string();
    cfg.output = (dir / "report").string();
    auto r = run_cli(cfg);
    REQUIRE(r.rc == 0);

    auto counts = nlohmann::json::parse(slurp(cfg.output + ".counts.json"));
    REQUIRE(counts["total_entries"] == 2);
    REQUIRE(counts["entries_with_any"] == 0);
    // No occurrences at all: the rank table is just its header.
    REQUIRE(lines_of(slurp(cfg.output + ".zipf.tsv")).size() == 1);
    REQUIRE(lines_of(slurp(cfg.output + ".rejects.jsonl")).size() == 1);

    RunConfig no_out = cfg;
    no_out.output.clear();
    REQUIRE(run_cli(no_out).rc == 1);
}

TEST_CASE("evaluate writes the full report set") {
    auto dir = fresh_dir("evaluate");
    write_file(
        dir / "pairs.jsonl",
        R"({"uid":"p1","premise":"Most dogs bark.","hypothesis":"Not every dog barks.","label":"entailment","predicted_label":"entailment"})"
        "\n"
        R"({"uid":"p2","premise":"x.","hypothesis":"y.","label":"contradiction","predicted_label":"neutral"})"
        "\n"
        R"({"uid":"p3","premise":"z.","hypothesis":"w.","predicted_label":"neutral"})"
        "\n");
    write_file(dir / "ann.conllu",
               "# sent_id = p1\n"
               "# field = premise\n"
               "1\tMost\tmost\tADJ\t_\t_\t2\tamod\t_\t_\n"
               "2\tdogs\tdog\tNOUN\t_\t_\t3\tnsubj\t_\t_\n"
               "3\tbark\tbark\tVERB\t_\t_\t0\troot\t_\t_\n"
               "\n"
               "# sent_id = p1\n"
               "# field = hypothesis\n"
               "1\tNot\tnot\tPART\t_\t_\t4\tadvmod\t_\t_\n"
               "2\tevery\tevery\tDET\t_\t_\t3\tdet\t_\t_\n"
               "3\tdog\tdog\tNOUN\t_\t_\t4\tnsubj\t_\t_\n"
               "4\tbarks\tbark\tVERB\t_\t_\t0\troot\t_\t_\n");

    RunConfig cfg;
    cfg.command = "evaluate";
    cfg.input = (dir / "pairs.jsonl").string();
    cfg.annotations = (dir / "ann.conllu").string();
    cfg.output = (dir / "eval").string();
    auto r = run_cli(cfg);
    REQUIRE(r.rc == 0);

    auto strat = nlohmann::json::parse(slurp(cfg.output + ".stratified.json"));
    REQUIRE(strat["full"]["n"] == 2);
    REQUIRE(strat["full"]["correct"] == 1);
    REQUIRE(strat["skipped"] == 1);
    REQUIRE(strat["weighted"] == strat["full"]["accuracy"]);
    REQUIRE(strat["per_category"]["all"]["n"] == 1);
    REQUIRE(strat["per_category"]["all"]["accuracy"] == 1.0);

    auto pw = nlohmann::json::parse(slurp(cfg.output + ".pairwise.json"));
    REQUIRE(pw["overall"]["n"] == 2);
    bool most_all = false, none_none = false;
    for (const auto& cell : pw["cells"]) {
        if (cell["premise"] == "most" && cell["hypothesis"] == "all") {
            most_all = true;
            REQUIRE(cell["n"] == 1);
            REQUIRE(cell["correct"] == 1);
        }
        if (cell["premise"] == "none" && cell["hypothesis"] == "none") {
            none_none = true;
            REQUIRE(cell["correct"] == 0);
        }
    }
    REQUIRE(most_all);
    REQUIRE(none_none);

    auto neg = lines_of(slurp(cfg.output + ".negation.jsonl"));
    REQUIRE(neg.size() == 1);
    auto nj = nlohmann::json::parse(neg[0]);
    REQUIRE(nj["uid"] == "p1");
    REQUIRE(nj["kinds"] == nlohmann::json::array({"all"}));
    REQUIRE(nj["cues"] == nlohmann::json::array({"not"}));

    auto tsv = slurp(cfg.output + ".stratified.tsv");
    REQUIRE(tsv.find("full\t2\t") != std::string::npos);
    auto ptsv = slurp(cfg.output + ".pairwise.tsv");
    REQUIRE(ptsv.find("overall\toverall\t2\t") != std::string::npos);
}

TEST_CASE("generate writes a balanced JSONL corpus") {
    auto dir = fresh_dir("generate");
    RunConfig cfg;
    cfg.command = "generate";
    cfg.templates_path = data_path("templates.json");
    cfg.count = 6;
    cfg.seed = 5;
    cfg.output = (dir / "items.jsonl").string();
    auto r = run_cli(cfg);
    REQUIRE(r.rc == 0);
    auto ls = lines_of(slurp(cfg.output));
    REQUIRE(ls.size() == 6);
    std::map<std::string, int> hist;
    for (const auto& line : ls) hist[nlohmann::json::parse(line)["label"]] += 1;
    REQUIRE(hist["entailment"] == 2);
    REQUIRE(hist["contradiction"] == 2);
    REQUIRE(hist["neutral"] == 2);
    REQUIRE(r.diag.find("6 items") != std::string::npos);

    RunConfig missing = cfg;
    missing.templates_path.clear();
    REQUIRE(run_cli(missing).rc == 1);
    RunConfig zero = cfg;
    zero.count = 0;
    REQUIRE(run_cli(zero).rc == 1);
}

TEST_CASE("agreement prints kappa as JSON") {
    RunConfig cfg;
    cfg.command = "agreement";
    cfg.input = data_path("fleiss_mixed.csv");
    auto r = run_cli(cfg);
    REQUIRE(r.rc == 0);
    auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["kappa"].get<double>() ==
            Catch::Approx(1.0 / 22.0).epsilon(0).margin(1e-9));
    REQUIRE(j["items"] == 4);
    REQUIRE(j["categories"] == 3);

    RunConfig no_input;
    no_input.command = "agreement";
    REQUIRE(run_cli(no_input).rc == 1);
}
