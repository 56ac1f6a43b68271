#include <CLI11.hpp>

#include "gqkit/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"gqkit: bounded-model NLI labeling and quantifier corpus analysis"};
    app.require_subcommand(1);

    gqkit::RunConfig cfg;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-i,--input", cfg.input, "input file");
        sub->add_option("-o,--output", cfg.output, "output file or report prefix");
        return sub;
    };

    auto* detect = add_common(app.add_subcommand("detect", "match quantifier patterns in CoNLL-U sentences"));
    detect->add_option("--patterns", cfg.patterns_path, "pattern rules TSV (default: built-in)");
    detect->add_option("--format", cfg.format, "output format (jsonl)");

    auto* stats = add_common(app.add_subcommand("stats", "category counts and rank-frequency table"));
    stats->add_option("--patterns", cfg.patterns_path, "pattern rules TSV (default: built-in)");
    stats->add_option("--annotations", cfg.annotations, "CoNLL-U annotations for a JSONL corpus");
    stats->add_option("--field", cfg.field, "text role to count on (default: hypothesis, or plain for CoNLL-U input)");
    stats->add_option("--premise-field", cfg.premise_key, "JSON key holding premise text");
    stats->add_option("--hypothesis-field", cfg.hypothesis_key, "JSON key holding hypothesis text");
    stats->add_option("--label-field", cfg.label_key, "JSON key holding the gold label");
    stats->add_option("--uid-field", cfg.uid_key, "JSON key holding the example id");

    auto* label = add_common(app.add_subcommand("label", "exhaustive bounded-model entailment labels for formula pairs"));
    label->add_option("--max-universe", cfg.max_universe, "override the bound carried by each signature");

    auto* generate = add_common(app.add_subcommand("generate", "balanced synthetic NLI items from templates"));
    generate->add_option("--templates", cfg.templates_path, "template definitions JSON")->required();
    generate->add_option("--count", cfg.count, "number of base items")->required();
    generate->add_option("--seed", cfg.seed, "RNG seed (default 0)");
    generate->add_option("--augment", cfg.augment, "items per base item, lexical variants included (default 1)");
    generate->add_option("--balance-tolerance", cfg.balance_tolerance, "allowed relative label imbalance (default 0.10)");

    auto* evaluate = add_common(app.add_subcommand("evaluate", "stratified accuracy, pairwise matrix, negation co-occurrence"));
    evaluate->add_option("--patterns", cfg.patterns_path, "pattern rules TSV (default: built-in)");
    evaluate->add_option("--cues", cfg.cues_path, "negation cue lexicon (default: built-in)");
    evaluate->add_option("--annotations", cfg.annotations, "CoNLL-U annotations for the corpus");
    evaluate->add_option("--premise-field", cfg.premise_key, "JSON key holding premise text");
    evaluate->add_option("--hypothesis-field", cfg.hypothesis_key, "JSON key holding hypothesis text");
    evaluate->add_option("--label-field", cfg.label_key, "JSON key holding the gold label");
    evaluate->add_option("--predicted-field", cfg.predicted_key, "JSON key holding the predicted label");
    evaluate->add_option("--uid-field", cfg.uid_key, "JSON key holding the example id");

    auto* agreement = add_common(app.add_subcommand("agreement", "chance-corrected inter-annotator agreement from a ratings CSV"));
    (void)agreement;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    cfg.command = app.get_subcommands().front()->get_name();
    return gqkit::run(cfg);
}
