#pragma once
// Paper-shaped report tables rendered as CSV, Markdown or JSON.
// CSV/Markdown print correlations with two decimals and render undefined
// cells as 0.00; the JSON form carries raw values with null for
// undefined, so the two stay distinguishable.

#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "inapt/aggregate.hpp"
#include "inapt/analysis.hpp"
#include "inapt/corpus.hpp"
#include "inapt/eval.hpp"
#include "inapt/mace.hpp"

namespace inapt {

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> cells;  // display strings
    json rows_json = json::array();               // raw values, null = undefined
};

namespace detail {

inline std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string fmt_corr(const Corr& c) { return fmt2(c.defined ? c.value : 0.0); }

inline json json_corr(const Corr& c) { return c.defined ? json(c.value) : json(nullptr); }

inline std::vector<AnnotationRecord> records_for_sources(const CorpusStore& store,
                                                         const std::set<Source>& sources) {
    std::vector<AnnotationRecord> out;
    for (const auto& r : store.annotations()) {
        const Argument* arg = store.find_argument(r.argument_id);
        if (arg && sources.count(arg->source)) out.push_back(r);
    }
    return out;
}

}  // namespace detail

enum class ReportFormat : uint8_t { csv, md, json_fmt };

inline std::string render_table(const Table& t, ReportFormat fmt) {
    std::ostringstream out;
    if (fmt == ReportFormat::json_fmt) {
        json doc = {{"table", t.name}, {"columns", t.columns}, {"rows", t.rows_json}};
        out << doc.dump(2) << '\n';
        return out.str();
    }
    auto csv_cell = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string quoted = "\"";
        for (char c : s) {
            if (c == '"') quoted += '"';
            quoted += c;
        }
        return quoted + '"';
    };
    if (fmt == ReportFormat::csv) {
        for (size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << csv_cell(t.columns[i]);
        out << '\n';
        for (const auto& row : t.cells) {
            for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
            out << '\n';
        }
    } else {
        out << '|';
        for (const auto& c : t.columns) out << ' ' << c << " |";
        out << "\n|";
        for (size_t i = 0; i < t.columns.size(); ++i) out << " --- |";
        out << '\n';
        for (const auto& row : t.cells) {
            out << '|';
            for (const auto& c : row) out << ' ' << (c.empty() ? " " : c) << " |";
            out << '\n';
        }
    }
    return out.str();
}

// (a) conservative yes/no counts per dimension.
inline Table build_table1a(const std::vector<AnnotationRecord>& records) {
    const LabelMatrix gold = aggregate_strategy(records, Strategy::conservative);
    Table t;
    t.name = "table1a";
    t.columns = {"dimension", "yes", "no"};
    for (Dim d : kAllDims) {
        const size_t yes = gold.yes_count(d);
        const size_t no = gold.size() - yes;
        t.cells.push_back({std::string(dim_code(d)), std::to_string(yes), std::to_string(no)});
        t.rows_json.push_back({{"dimension", std::string(dim_code(d))}, {"yes", yes}, {"no", no}});
    }
    return t;
}

// (b) full agreement and Krippendorff's alpha per dimension.
inline Table build_table1b(const std::vector<AnnotationRecord>& records,
                           AlphaMetricChoice metric = AlphaMetricChoice::auto_metric) {
    const AgreementReport report = agreement_report(records, metric);
    Table t;
    t.name = "table1b";
    t.columns = {"dimension", "full_agreement_pct", "alpha"};
    for (const auto& row : report.rows) {
        char pct[16];
        std::snprintf(pct, sizeof pct, "%.0f", row.full_agreement_pct);
        t.cells.push_back({std::string(dim_code(row.dim)), pct, detail::fmt2(row.alpha.alpha)});
        t.rows_json.push_back({{"dimension", std::string(dim_code(row.dim))},
                               {"full_agreement_pct", row.full_agreement_pct},
                               {"alpha", row.alpha.alpha},
                               {"alpha_degenerate", row.alpha.degenerate}});
    }
    return t;
}

inline Table table_from_matrix(const std::string& name, const CorrelationMatrix& m,
                               const std::string& row_header, bool blank_diagonal,
                               const std::vector<std::string>* row_display = nullptr) {
    Table t;
    t.name = name;
    t.columns = {row_header};
    for (const auto& c : m.col_labels) t.columns.push_back(c);
    for (size_t r = 0; r < m.row_labels.size(); ++r) {
        std::vector<std::string> row = {row_display ? (*row_display)[r] : m.row_labels[r]};
        json jrow = {{row_header, row[0]}};
        for (size_t c = 0; c < m.col_labels.size(); ++c) {
            if (blank_diagonal && m.row_labels[r] == m.col_labels[c]) {
                row.push_back("");
                jrow[m.col_labels[c]] = nullptr;
            } else {
                row.push_back(detail::fmt_corr(m.at(r, c)));
                jrow[m.col_labels[c]] = detail::json_corr(m.at(r, c));
            }
        }
        t.cells.push_back(std::move(row));
        t.rows_json.push_back(std::move(jrow));
    }
    return t;
}

// (c) 14x14 tau matrix, per-annotator averaged.
inline Table build_table1c(const std::vector<AnnotationRecord>& records) {
    return table_from_matrix("table1c", dimension_correlations(records), "dimension", true);
}

// Combined corpus-statistics table (the Table 1 / appendix Tables 8-11
// shape): counts, agreement, and the tau matrix side by side.
inline Table build_corpus_table(const std::string& name, const std::vector<AnnotationRecord>& records,
                                AlphaMetricChoice metric = AlphaMetricChoice::auto_metric) {
    const Table a = build_table1a(records);
    const Table b = build_table1b(records, metric);
    const Table c = build_table1c(records);
    Table t;
    t.name = name;
    t.columns = {"dimension", "yes", "no", "full_agreement_pct", "alpha"};
    for (Dim d : kAllDims) t.columns.emplace_back(dim_code(d));
    for (size_t i = 0; i < static_cast<size_t>(kDimCount); ++i) {
        std::vector<std::string> row = {a.cells[i][0], a.cells[i][1], a.cells[i][2], b.cells[i][1], b.cells[i][2]};
        json jrow = a.rows_json[i];
        jrow.update(b.rows_json[i]);
        for (size_t cc = 1; cc < c.cells[i].size(); ++cc) row.push_back(c.cells[i][cc]);
        jrow["tau"] = c.rows_json[i];
        t.cells.push_back(std::move(row));
        t.rows_json.push_back(std::move(jrow));
    }
    return t;
}

// Alpha between MACE labels and each combination strategy.
inline Table build_table2(const std::vector<AnnotationRecord>& records, const MaceConfig& cfg) {
    const MaceModel model = mace_fit(records, cfg);
    const LabelMatrix mace = mace_labels(model);
    Table t;
    t.name = "table2";
    t.columns = {"dimension", "liberal", "majority", "conservative"};
    std::array<std::array<AlphaResult, kDimCount>, 3> alphas;
    const std::array<Strategy, 3> strategies = {Strategy::liberal, Strategy::majority, Strategy::conservative};
    for (size_t s = 0; s < strategies.size(); ++s)
        alphas[s] = compare_aggregations(mace, aggregate_strategy(records, strategies[s]));
    for (Dim d : kAllDims) {
        std::vector<std::string> row = {std::string(dim_code(d))};
        json jrow = {{"dimension", row[0]}};
        for (size_t s = 0; s < strategies.size(); ++s) {
            row.push_back(detail::fmt2(alphas[s][static_cast<size_t>(d)].alpha));
            jrow[std::string(strategy_name(strategies[s]))] = alphas[s][static_cast<size_t>(d)].alpha;
        }
        t.cells.push_back(std::move(row));
        t.rows_json.push_back(std::move(jrow));
    }
    return t;
}

// Correlations with the theory-side quality ratings (Dagstuhl set).
inline Table build_table3(const CorpusStore& store) {
    const auto m = external_correlations(store.annotations(), store.ratings(), dagstuhl_quality_dims());
    std::vector<std::string> display;
    for (const auto& q : dagstuhl_quality_dims()) display.emplace_back(q.label);
    return table_from_matrix("table3", m, "quality_dimension", false, &display);
}

// Correlations with the convincingness comparison reasons.
inline Table build_table4(const CorpusStore& store) {
    const auto m = pair_reason_correlations(store.pairs(), store.annotations());
    std::vector<std::string> display;
    for (const auto& r : pair_reason_catalog()) display.emplace_back(r.label);
    return table_from_matrix("table4", m, "reason", false, &display);
}

// GAQ-side quality correlations.
inline Table build_table7(const CorpusStore& store) {
    const auto m = external_correlations(store.annotations(), store.ratings(), gaq_quality_dims());
    std::vector<std::string> display;
    for (const auto& q : gaq_quality_dims()) display.emplace_back(q.label);
    return table_from_matrix("table7", m, "quality_dimension", false, &display);
}

// Appendix per-source corpus statistics.
inline Table build_source_table(const std::string& name, const CorpusStore& store,
                                const std::set<Source>& sources) {
    return build_corpus_table(name, detail::records_for_sources(store, sources));
}

// F1 per approach: random and majority baselines, optional external
// prediction sets, human performance.
inline Table build_table5(const CorpusStore& store, const LabelMatrix& gold, const FoldPlan& plan,
                          uint64_t seed, const std::vector<PredictionSet>& external = {}) {
    std::vector<ScoreReport> reports;
    reports.push_back(score(random_baseline(plan, Rng(seed).fork(100).next_u64()), gold, plan));
    reports.back().approach = "random baseline";
    reports.push_back(score(majority_baseline(plan, gold), gold, plan));
    reports.back().approach = "majority baseline";
    for (const auto& preds : external) reports.push_back(score(preds, gold, plan));
    reports.push_back(human_performance(store.annotations(), gold));
    reports.back().approach = "human performance";

    Table t;
    t.name = "table5";
    t.columns = {"approach"};
    for (Dim d : kAllDims) t.columns.emplace_back(dim_code(d));
    t.columns.emplace_back("macro");
    for (const auto& r : reports) {
        std::vector<std::string> row = {r.approach};
        json jrow = {{"approach", r.approach}};
        for (Dim d : kAllDims) {
            row.push_back(detail::fmt2(r.per_dim[static_cast<size_t>(d)]));
            jrow[std::string(dim_code(d))] = r.per_dim[static_cast<size_t>(d)];
        }
        row.push_back(detail::fmt2(r.macro));
        jrow["macro"] = r.macro;
        t.cells.push_back(std::move(row));
        t.rows_json.push_back(std::move(jrow));
    }
    return t;
}

// Descriptive corpus statistics (optionally grouped).
inline Table build_stats_table(const CorpusStore& store, GroupBy group_by) {
    const CorpusStats stats = store.stats(group_by);
    Table t;
    t.name = "stats";
    t.columns = {"group", "arguments", "issues", "debate", "qa-forum", "review", "mean_sentences"};
    auto emit = [&](const std::string& label, const GroupStats& g) {
        t.cells.push_back({label, std::to_string(g.arguments), std::to_string(g.issues),
                           std::to_string(g.genre_counts[0]), std::to_string(g.genre_counts[1]),
                           std::to_string(g.genre_counts[2]), detail::fmt2(g.mean_sentences)});
        t.rows_json.push_back({{"group", label},
                               {"arguments", g.arguments},
                               {"issues", g.issues},
                               {"debate", g.genre_counts[0]},
                               {"qa-forum", g.genre_counts[1]},
                               {"review", g.genre_counts[2]},
                               {"mean_sentences", g.mean_sentences}});
    };
    emit("total", stats.total);
    for (const auto& [label, g] : stats.groups) emit(label, g);
    return t;
}

// Venn cell counts for a quality-dimension subset.
inline Table build_venn_table(const VennReport& report) {
    Table t;
    t.name = "venn";
    t.columns = {"subset", "count"};
    for (const auto& [mask, count] : report.cells) {
        std::string label;
        for (size_t i = 0; i < report.dims.size(); ++i)
            if (mask & (1u << i)) {
                if (!label.empty()) label += '&';
                label += report.dims[i];
            }
        if (label.empty()) label = "(none)";
        t.cells.push_back({label, std::to_string(count)});
        t.rows_json.push_back({{"subset", label}, {"mask", mask}, {"count", count}});
    }
    return t;
}

}  // namespace inapt
