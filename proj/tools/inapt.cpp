// inapt: command-line workbench for hierarchical appropriateness
// annotations. Subcommands map 1:1 onto the library operations; every
// stochastic subcommand takes --seed and is byte-reproducible.
//
// Exit codes: 0 success, 1 data error (JSON report on stderr), 2 usage.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "inapt/adapter.hpp"
#include "inapt/aggregate.hpp"
#include "inapt/analysis.hpp"
#include "inapt/corpus.hpp"
#include "inapt/eval.hpp"
#include "inapt/mace.hpp"
#include "inapt/report.hpp"
#include "inapt/service.hpp"

namespace fs = std::filesystem;
using namespace inapt;

namespace {

fs::path store_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("INAPT_DATA"); env && *env) return env;
    return ".";
}

Format parse_fmt(const std::string& s) {
    if (s == "tsv") return Format::tsv;
    if (s == "jsonl") return Format::jsonl;
    throw CLI::ValidationError("--format", "expected tsv or jsonl");
}

ReportFormat parse_report_fmt(const std::string& s) {
    if (s == "csv") return ReportFormat::csv;
    if (s == "md") return ReportFormat::md;
    if (s == "json") return ReportFormat::json_fmt;
    throw CLI::ValidationError("--format", "expected csv, md or json");
}

ValidationMode parse_mode(const std::string& s) {
    return s == "strict" ? ValidationMode::strict : ValidationMode::lenient;
}

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty() || out_path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path, std::ios::trunc | std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << content;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return in;
}

json issues_json(const std::vector<LineIssue>& issues) {
    json arr = json::array();
    for (const auto& i : issues) arr.push_back({{"line", i.line}, {"message", i.message}});
    return arr;
}

json report_json(const IngestReport& r) {
    return {{"ingested", r.ingested},   {"skipped", r.skipped},
            {"errors", issues_json(r.errors)}, {"rejected", issues_json(r.rejected)},
            {"repairs", issues_json(r.repairs)}, {"warnings", issues_json(r.warnings)}};
}

json score_report_json(const ScoreReport& r) {
    json per_dim = json::object();
    for (Dim d : kAllDims) per_dim[std::string(dim_code(d))] = r.per_dim[static_cast<size_t>(d)];
    json folds = json::array();
    for (const auto& f : r.per_fold_dim) {
        json row = json::object();
        for (Dim d : kAllDims) row[std::string(dim_code(d))] = f[static_cast<size_t>(d)];
        folds.push_back(row);
    }
    return {{"approach", r.approach},
            {"per_dimension", per_dim},
            {"macro", r.macro},
            {"per_fold_macro", r.per_fold_macro},
            {"per_fold_dimension", folds}};
}

ScoreReport score_report_from_json(const json& j) {
    ScoreReport r;
    r.approach = j.value("approach", std::string());
    for (Dim d : kAllDims)
        r.per_dim[static_cast<size_t>(d)] = j.at("per_dimension").at(std::string(dim_code(d))).get<double>();
    r.macro = j.at("macro").get<double>();
    for (const auto& v : j.at("per_fold_macro")) r.per_fold_macro.push_back(v.get<double>());
    for (const auto& row : j.at("per_fold_dimension")) {
        std::array<double, kDimCount> f{};
        for (Dim d : kAllDims) f[static_cast<size_t>(d)] = row.at(std::string(dim_code(d))).get<double>();
        r.per_fold_dim.push_back(f);
    }
    return r;
}

LabelMatrix load_gold(const std::string& labels_path, const std::string& store_flag) {
    if (!labels_path.empty()) {
        auto in = open_input(labels_path);
        return read_label_matrix(in);
    }
    const CorpusStore store = load_store(store_dir(store_flag));
    return aggregate_strategy(store.annotations(), Strategy::conservative);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"workbench for hierarchical appropriateness annotations"};
    app.require_subcommand(1);

    std::string store_flag, in_path, out_path, format = "tsv", report_format = "csv";
    std::string mode = "lenient", strategy = "conservative", metric = "auto";
    std::string kind, adapter_path, labels_path, folds_path, pred_path, name = "external";
    std::string dims_csv, what = "dimensions", report_a, report_b, on_duplicate = "error";
    std::string host = "127.0.0.1", admin_token, global_weights;
    std::vector<std::string> pred_specs;
    uint64_t seed = 0;
    int iterations = 50, restarts = 10, repetitions = 5, folds_k = 5, port = 8080;
    double smoothing = 0.1, threshold = 1.0, alpha_level = 0.05;
    bool seed_set = false;

    auto add_store = [&](CLI::App* cmd) { cmd->add_option("--store", store_flag, "store directory (or $INAPT_DATA)"); };
    auto add_out = [&](CLI::App* cmd) { cmd->add_option("--out", out_path, "output file (default stdout)"); };
    auto add_seed = [&](CLI::App* cmd, bool required) {
        auto* opt = cmd->add_option("--seed", seed, "random seed")->check(CLI::NonNegativeNumber);
        if (required) opt->required();
        opt->each([&](const std::string&) { seed_set = true; });
    };

    // ingest
    auto* ingest = app.add_subcommand("ingest", "ingest corpus files into a store");
    add_store(ingest);
    ingest->add_option("--in", in_path, "input file")->required();
    ingest->add_option("--kind", kind, "arguments|annotations|ratings|pairs")->required();
    ingest->add_option("--format", format, "tsv|jsonl|csv (csv = wide adapter import)");
    ingest->add_option("--mode", mode, "strict|lenient (annotations)");
    ingest->add_option("--adapter", adapter_path, "adapter mapping json (csv format)");
    ingest->add_option("--on-duplicate", on_duplicate, "error|skip");

    // validate
    auto* validate_cmd = app.add_subcommand("validate", "validate an annotations file");
    validate_cmd->add_option("--in", in_path, "annotations file")->required();
    validate_cmd->add_option("--format", format, "tsv|jsonl");
    validate_cmd->add_option("--mode", mode, "strict|lenient");

    // aggregate
    auto* aggregate_cmd = app.add_subcommand("aggregate", "aggregate annotations into gold labels");
    add_store(aggregate_cmd);
    add_out(aggregate_cmd);
    aggregate_cmd->add_option("--strategy", strategy, "liberal|majority|conservative");

    // mace
    auto* mace_cmd = app.add_subcommand("mace", "fit the annotator-reliability model");
    add_store(mace_cmd);
    add_out(mace_cmd);
    add_seed(mace_cmd, true);
    mace_cmd->add_option("--iterations", iterations, "EM iterations per restart");
    mace_cmd->add_option("--restarts", restarts, "EM restarts");
    mace_cmd->add_option("--smoothing", smoothing, "additive smoothing");
    std::string model_path;
    mace_cmd->add_option("--model", model_path, "also write fitted model json");

    // agreement
    auto* agreement_cmd = app.add_subcommand("agreement", "full agreement + Krippendorff's alpha");
    add_store(agreement_cmd);
    add_out(agreement_cmd);
    agreement_cmd->add_option("--metric", metric, "auto|nominal|ordinal");
    agreement_cmd->add_option("--format", report_format, "csv|md|json");

    // correlate
    auto* correlate_cmd = app.add_subcommand("correlate", "correlation matrices");
    add_store(correlate_cmd);
    add_out(correlate_cmd);
    correlate_cmd->add_option("--what", what, "dimensions|quality|gaq|pairs");
    correlate_cmd->add_option("--format", report_format, "csv|md|json");

    // venn
    auto* venn_cmd = app.add_subcommand("venn", "low-quality overlap cell counts");
    add_store(venn_cmd);
    add_out(venn_cmd);
    venn_cmd->add_option("--dims", dims_csv, "comma-separated quality dimensions")->required();
    venn_cmd->add_option("--threshold", threshold, "low-rating threshold (mean <= t)");
    venn_cmd->add_option("--format", report_format, "csv|md|json");

    // folds
    auto* folds_cmd = app.add_subcommand("folds", "build the stratified cross-validation plan");
    add_store(folds_cmd);
    add_out(folds_cmd);
    add_seed(folds_cmd, true);
    folds_cmd->add_option("--labels", labels_path, "gold label matrix (default: conservative from store)");
    folds_cmd->add_option("--repetitions", repetitions, "repetitions");
    folds_cmd->add_option("--folds", folds_k, "folds per repetition");

    // weights
    auto* weights_cmd = app.add_subcommand("weights", "per-dimension class weights for external trainers");
    weights_cmd->add_option("--labels", labels_path, "gold label matrix")->required();
    weights_cmd->add_option("--folds", folds_path, "fold plan (per-folding weight files)");
    weights_cmd->add_option("--out", out_path, "output directory (with --folds) or file");
    weights_cmd->add_option("--global", global_weights, "also write corpus-wide weights to this file");

    // baseline
    auto* baseline_cmd = app.add_subcommand("baseline", "random / majority baseline predictions");
    add_out(baseline_cmd);
    baseline_cmd->add_option("--kind", kind, "random|majority")->required();
    baseline_cmd->add_option("--labels", labels_path, "gold label matrix")->required();
    baseline_cmd->add_option("--folds", folds_path, "fold plan")->required();
    add_seed(baseline_cmd, false);

    // score
    auto* score_cmd = app.add_subcommand("score", "score a prediction set against gold");
    add_out(score_cmd);
    score_cmd->add_option("--pred", pred_path, "predictions file")->required();
    score_cmd->add_option("--labels", labels_path, "gold label matrix")->required();
    score_cmd->add_option("--folds", folds_path, "fold plan")->required();
    score_cmd->add_option("--name", name, "approach name");

    // human
    auto* human_cmd = app.add_subcommand("human", "per-annotator upper bound against gold");
    add_store(human_cmd);
    add_out(human_cmd);
    human_cmd->add_option("--labels", labels_path, "gold label matrix (default: conservative from store)");

    // significance
    auto* significance_cmd = app.add_subcommand("significance", "Wilcoxon verdict between two score reports");
    add_out(significance_cmd);
    significance_cmd->add_option("--report-a", report_a, "score report json")->required();
    significance_cmd->add_option("--report-b", report_b, "score report json")->required();
    significance_cmd->add_option("--alpha", alpha_level, "significance level");

    // serve
    auto* serve_cmd = app.add_subcommand("serve", "run the annotation campaign server");
    serve_cmd->add_option("--data", store_flag, "data directory (corpus store + campaigns)");
    serve_cmd->add_option("--port", port, "port (0 = pick a free one)");
    serve_cmd->add_option("--host", host, "bind host");
    serve_cmd->add_option("--admin-token", admin_token, "admin bearer token (or $INAPT_ADMIN_TOKEN)");

    // report
    auto* report_cmd = app.add_subcommand("report", "paper-shaped tables");
    std::string table;
    report_cmd->add_option("table", table,
                           "table1|table1a|table1b|table1c|table2|table3|table4|table5|table7|"
                           "table8|table9|table10|table11|stats")
        ->required();
    add_store(report_cmd);
    add_out(report_cmd);
    add_seed(report_cmd, false);
    report_cmd->add_option("--format", report_format, "csv|md|json");
    report_cmd->add_option("--metric", metric, "auto|nominal|ordinal (agreement tables)");
    std::string group_by = "none";
    report_cmd->add_option("--group-by", group_by, "none|source|genre (stats)");
    report_cmd->add_option("--pred", pred_specs, "NAME=predictions.tsv (table5, repeatable)");
    report_cmd->add_option("--iterations", iterations, "MACE iterations (table2)");
    report_cmd->add_option("--restarts", restarts, "MACE restarts (table2)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::string op = app.get_subcommands().front()->get_name();
    try {
        if (*ingest) {
            const fs::path dir = store_dir(store_flag);
            StoreLock lock(dir);
            CorpusStore store = load_store(dir);
            auto in = open_input(in_path);
            IngestReport report;
            if (format == "csv") {
                AdapterMapping mapping;
                if (!adapter_path.empty()) {
                    auto mf = open_input(adapter_path);
                    mapping = AdapterMapping::from_json(json::parse(mf));
                }
                AdapterResult result = import_wide_csv(in, mapping, store, parse_mode(mode));
                json out = {{"arguments", report_json(result.arguments)},
                            {"annotations", report_json(result.annotations)}};
                write_store_files(dir, store);
                std::cout << out.dump(2) << '\n';
                return (result.arguments.clean() && result.annotations.clean()) ? 0 : 1;
            }
            const Format fmt = parse_fmt(format);
            const DupPolicy dup = on_duplicate == "skip" ? DupPolicy::skip : DupPolicy::error;
            if (kind == "arguments") report = store.ingest_arguments(in, fmt, dup);
            else if (kind == "annotations") report = store.ingest_annotations(in, fmt, parse_mode(mode), dup);
            else if (kind == "ratings") report = store.ingest_ratings(in, fmt, dup);
            else if (kind == "pairs") report = store.ingest_pairs(in, fmt, dup);
            else throw CLI::ValidationError("--kind", "expected arguments|annotations|ratings|pairs");
            write_store_files(dir, store);
            std::cout << report_json(report).dump(2) << '\n';
            return report.clean() ? 0 : 1;
        }

        if (*validate_cmd) {
            auto in = open_input(in_path);
            CorpusStore scratch;
            IngestReport parse_report;
            json rows = json::array();
            size_t checked = 0, bad = 0;
            scratch.read_annotation_rows(in, parse_fmt(format), parse_report,
                                         [&](size_t line, AnnotationRecord rec) {
                                             ++checked;
                                             const auto result = validate(rec, parse_mode(mode));
                                             if (result.ok() && result.warnings.empty()) return;
                                             json row = {{"line", line},
                                                         {"argument_id", rec.argument_id},
                                                         {"annotator_id", rec.annotator_id},
                                                         {"structural", result.structural},
                                                         {"violations", json::array()},
                                                         {"warnings", json::array()}};
                                             for (const auto& v : result.violations)
                                                 row["violations"].push_back({{"rule", std::string(rule_name(v.rule))},
                                                                              {"dimension", std::string(dim_code(v.dim))},
                                                                              {"message", v.message}});
                                             for (const auto& w : result.warnings)
                                                 row["warnings"].push_back(w.message);
                                             if (!result.ok()) ++bad;
                                             rows.push_back(std::move(row));
                                         });
            json out = {{"checked", checked},
                        {"invalid", bad},
                        {"parse_errors", issues_json(parse_report.errors)},
                        {"records", rows}};
            write_output(out_path, out.dump(2) + "\n");
            return parse_report.errors.empty() ? 0 : 1;
        }

        if (*aggregate_cmd) {
            const CorpusStore store = load_store(store_dir(store_flag));
            Strategy s = Strategy::conservative;
            if (strategy == "liberal") s = Strategy::liberal;
            else if (strategy == "majority") s = Strategy::majority;
            else if (strategy != "conservative")
                throw CLI::ValidationError("--strategy", "expected liberal|majority|conservative");
            std::ostringstream out;
            write_label_matrix(out, aggregate_strategy(store.annotations(), s));
            write_output(out_path, out.str());
            return 0;
        }

        if (*mace_cmd) {
            const CorpusStore store = load_store(store_dir(store_flag));
            MaceConfig cfg;
            cfg.iterations = iterations;
            cfg.restarts = restarts;
            cfg.smoothing = smoothing;
            cfg.seed = seed;
            const MaceModel model = mace_fit(store.annotations(), cfg);
            std::ostringstream out;
            write_label_matrix(out, mace_labels(model));
            write_output(out_path, out.str());
            if (!model_path.empty()) {
                json doc = {{"config",
                             {{"iterations", cfg.iterations},
                              {"restarts", cfg.restarts},
                              {"smoothing", cfg.smoothing},
                              {"seed", cfg.seed}}},
                            {"annotators", model.annotator_ids},
                            {"log_likelihood", model.log_likelihood},
                            {"dimensions", json::object()}};
                for (Dim d : kAllDims) {
                    const auto& fit = model.dims[static_cast<size_t>(d)];
                    doc["dimensions"][std::string(dim_code(d))] = {{"theta", fit.theta},
                                                                   {"xi", fit.xi},
                                                                   {"objective", fit.objective},
                                                                   {"best_restart", fit.best_restart}};
                }
                write_output(model_path, doc.dump(2) + "\n");
            }
            return 0;
        }

        if (*agreement_cmd) {
            const CorpusStore store = load_store(store_dir(store_flag));
            AlphaMetricChoice choice = AlphaMetricChoice::auto_metric;
            if (metric == "nominal") choice = AlphaMetricChoice::nominal_all;
            else if (metric == "ordinal") choice = AlphaMetricChoice::ordinal_all;
            write_output(out_path,
                         render_table(build_table1b(store.annotations(), choice), parse_report_fmt(report_format)));
            return 0;
        }

        if (*correlate_cmd) {
            const CorpusStore store = load_store(store_dir(store_flag));
            Table t;
            if (what == "dimensions") t = build_table1c(store.annotations());
            else if (what == "quality") t = build_table3(store);
            else if (what == "gaq") t = build_table7(store);
            else if (what == "pairs") t = build_table4(store);
            else throw CLI::ValidationError("--what", "expected dimensions|quality|gaq|pairs");
            write_output(out_path, render_table(t, parse_report_fmt(report_format)));
            return 0;
        }

        if (*venn_cmd) {
            const CorpusStore store = load_store(store_dir(store_flag));
            std::vector<std::string> dims;
            std::stringstream ss(dims_csv);
            std::string item;
            while (std::getline(ss, item, ','))
                if (!item.empty()) dims.push_back(item);
            const VennReport report = venn_overlap(store.ratings(), dims, threshold);
            write_output(out_path, render_table(build_venn_table(report), parse_report_fmt(report_format)));
            return 0;
        }

        if (*folds_cmd) {
            const LabelMatrix gold = load_gold(labels_path, store_flag);
            const FoldPlan plan = make_folds(gold, seed, repetitions, folds_k);
            std::ostringstream out;
            write_fold_plan(out, plan);
            write_output(out_path, out.str());
            return 0;
        }

        if (*weights_cmd) {
            auto lin = open_input(labels_path);
            const LabelMatrix gold = read_label_matrix(lin);
            if (!global_weights.empty()) {
                std::ostringstream out;
                write_weights(out, class_weights(gold, gold.argument_ids));
                write_output(global_weights, out.str());
            }
            if (!folds_path.empty()) {
                auto fin = open_input(folds_path);
                const FoldPlan plan = read_fold_plan(fin);
                const fs::path dir = out_path.empty() ? "." : out_path;
                fs::create_directories(dir);
                for (int rep = 0; rep < plan.repetitions; ++rep)
                    for (int fold = 0; fold < plan.folds; ++fold) {
                        std::ostringstream out;
                        write_weights(out, class_weights(gold, plan.at(rep, fold).train));
                        const auto file =
                            dir / ("weights_r" + std::to_string(rep) + "_f" + std::to_string(fold) + ".tsv");
                        write_output(file.string(), out.str());
                    }
            } else if (global_weights.empty()) {
                std::ostringstream out;
                write_weights(out, class_weights(gold, gold.argument_ids));
                write_output(out_path, out.str());
            }
            return 0;
        }

        if (*baseline_cmd) {
            auto lin = open_input(labels_path);
            const LabelMatrix gold = read_label_matrix(lin);
            auto fin = open_input(folds_path);
            const FoldPlan plan = read_fold_plan(fin);
            PredictionSet preds;
            if (kind == "random") {
                if (!seed_set) throw CLI::ValidationError("--seed", "required for the random baseline");
                preds = random_baseline(plan, seed);
            } else if (kind == "majority") {
                preds = majority_baseline(plan, gold);
            } else {
                throw CLI::ValidationError("--kind", "expected random|majority");
            }
            std::ostringstream out;
            write_predictions(out, preds);
            write_output(out_path, out.str());
            return 0;
        }

        if (*score_cmd) {
            auto lin = open_input(labels_path);
            const LabelMatrix gold = read_label_matrix(lin);
            auto fin = open_input(folds_path);
            const FoldPlan plan = read_fold_plan(fin);
            auto pin = open_input(pred_path);
            const PredictionSet preds = read_predictions(pin, name);
            const ScoreReport report = score(preds, gold, plan);
            write_output(out_path, score_report_json(report).dump(2) + "\n");
            return 0;
        }

        if (*human_cmd) {
            const CorpusStore store = load_store(store_dir(store_flag));
            const LabelMatrix gold = load_gold(labels_path, store_flag);
            std::vector<std::string> warnings;
            const ScoreReport report = human_performance(store.annotations(), gold, &warnings);
            json out = score_report_json(report);
            out["warnings"] = warnings;
            write_output(out_path, out.dump(2) + "\n");
            return 0;
        }

        if (*significance_cmd) {
            auto ain = open_input(report_a);
            auto bin = open_input(report_b);
            const ScoreReport a = score_report_from_json(json::parse(ain));
            const ScoreReport b = score_report_from_json(json::parse(bin));
            const SignificanceVerdict v = significance(a, b, alpha_level);
            json out = {{"approach_a", a.approach},
                        {"approach_b", b.approach},
                        {"mean_macro_a", v.mean_a},
                        {"mean_macro_b", v.mean_b},
                        {"tested", v.test.tested},
                        {"statistic", v.test.statistic},
                        {"w_plus", v.test.w_plus},
                        {"w_minus", v.test.w_minus},
                        {"p_value", v.test.p_value},
                        {"exact", v.test.exact},
                        {"alpha_level", alpha_level},
                        {"significant", v.significant}};
            write_output(out_path, out.dump(2) + "\n");
            return 0;
        }

        if (*serve_cmd) {
            const fs::path dir = store_dir(store_flag);
            if (admin_token.empty())
                if (const char* env = std::getenv("INAPT_ADMIN_TOKEN"); env && *env) admin_token = env;
            if (admin_token.empty()) throw std::runtime_error("--admin-token (or $INAPT_ADMIN_TOKEN) required");
            CorpusStore corpus = load_store(dir);
            CampaignService service(dir, std::move(corpus), admin_token);
            httplib::Server server;
            service.register_routes(server);
            int bound = port;
            if (port == 0) {
                bound = server.bind_to_any_port(host);
                if (bound < 0) throw std::runtime_error("cannot bind " + host);
            } else if (!server.bind_to_port(host, port)) {
                throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
            }
            {
                std::ofstream pf(dir / "port", std::ios::trunc);
                pf << bound << '\n';
            }
            std::cout << "listening on " << host << ":" << bound << std::endl;
            server.listen_after_bind();
            return 0;
        }

        if (*report_cmd) {
            const CorpusStore store = load_store(store_dir(store_flag));
            AlphaMetricChoice choice = AlphaMetricChoice::auto_metric;
            if (metric == "nominal") choice = AlphaMetricChoice::nominal_all;
            else if (metric == "ordinal") choice = AlphaMetricChoice::ordinal_all;
            Table t;
            if (table == "table1a") t = build_table1a(store.annotations());
            else if (table == "table1b") t = build_table1b(store.annotations(), choice);
            else if (table == "table1c") t = build_table1c(store.annotations());
            else if (table == "table1") t = build_corpus_table("table1", store.annotations(), choice);
            else if (table == "table2") {
                if (!seed_set) throw CLI::ValidationError("--seed", "required for table2 (MACE)");
                MaceConfig cfg;
                cfg.iterations = iterations;
                cfg.restarts = restarts;
                cfg.seed = seed;
                t = build_table2(store.annotations(), cfg);
            } else if (table == "table3") t = build_table3(store);
            else if (table == "table4") t = build_table4(store);
            else if (table == "table5") {
                if (!seed_set) throw CLI::ValidationError("--seed", "required for table5 (folds + baselines)");
                const LabelMatrix gold = aggregate_strategy(store.annotations(), Strategy::conservative);
                const FoldPlan plan = make_folds(gold, seed);
                std::vector<PredictionSet> external;
                for (const auto& spec : pred_specs) {
                    const auto eq = spec.find('=');
                    if (eq == std::string::npos)
                        throw CLI::ValidationError("--pred", "expected NAME=predictions.tsv");
                    auto pin = open_input(spec.substr(eq + 1));
                    external.push_back(read_predictions(pin, spec.substr(0, eq)));
                }
                t = build_table5(store, gold, plan, seed, external);
            } else if (table == "table7") t = build_table7(store);
            else if (table == "table8")
                t = build_source_table("table8", store, {Source::dagstuhl, Source::ukpconvarg2});
            else if (table == "table9") t = build_source_table("table9", store, {Source::gaq_debates});
            else if (table == "table10") t = build_source_table("table10", store, {Source::gaq_qa});
            else if (table == "table11") t = build_source_table("table11", store, {Source::gaq_reviews});
            else if (table == "stats") {
                GroupBy g = GroupBy::none;
                if (group_by == "source") g = GroupBy::source;
                else if (group_by == "genre") g = GroupBy::genre;
                t = build_stats_table(store, g);
            } else {
                throw CLI::ValidationError("table", "unknown table: " + table);
            }
            write_output(out_path, render_table(t, parse_report_fmt(report_format)));
            return 0;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << json{{"status", "error"}, {"operation", op}, {"error", e.what()}}.dump() << '\n';
        return 1;
    }
    return 2;
}
