#pragma once
// Agreement and correlation analytics over corpus data: the table
// builders behind the agreement/correlate/venn subcommands. Pure
// functions on CorpusStore contents + LabelMatrix.

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "inapt/aggregate.hpp"
#include "inapt/corpus.hpp"
#include "inapt/stats.hpp"
#include "inapt/taxonomy.hpp"

namespace inapt {

struct AgreementRow {
    Dim dim;
    double full_agreement_pct = 0.0;
    AlphaResult alpha;
};

struct AgreementReport {
    std::vector<AgreementRow> rows;  // table order
    size_t annotators = 0;
    size_t items = 0;
};

// How alpha's difference metric is chosen per dimension. `auto_metric`
// follows the design call: ordinal for the 3-level IN scale, nominal for
// the binary dimensions.
enum class AlphaMetricChoice : uint8_t { auto_metric, nominal_all, ordinal_all };

namespace detail {

// Labels per item for one dimension, one inner vector per argument;
// IN stays on the raw 1..3 scale.
inline std::vector<std::vector<double>> units_for_dim(const std::vector<AnnotationRecord>& records, Dim d) {
    std::map<std::string, std::vector<double>> by_arg;
    for (const auto& r : records) {
        const double v = (d == Dim::IN) ? static_cast<double>(r.in_rating) : (r.flag(d) ? 1.0 : 0.0);
        by_arg[r.argument_id].push_back(v);
    }
    std::vector<std::vector<double>> units;
    units.reserve(by_arg.size());
    for (auto& [id, vals] : by_arg) units.push_back(std::move(vals));
    return units;
}

}  // namespace detail

inline double full_agreement(const std::vector<AnnotationRecord>& records, Dim d) {
    const auto units = detail::units_for_dim(records, d);
    if (units.empty()) throw std::invalid_argument("full_agreement: no records");
    return full_agreement_pct(units);
}

inline AgreementReport agreement_report(const std::vector<AnnotationRecord>& records,
                                        AlphaMetricChoice metric = AlphaMetricChoice::auto_metric) {
    AgreementReport report;
    std::set<std::string> annotators, items;
    for (const auto& r : records) {
        annotators.insert(r.annotator_id);
        items.insert(r.argument_id);
    }
    report.annotators = annotators.size();
    report.items = items.size();
    for (Dim d : kAllDims) {
        const auto units = detail::units_for_dim(records, d);
        if (units.empty()) throw std::invalid_argument("agreement_report: no records");
        AlphaMetric m = AlphaMetric::nominal;
        if (metric == AlphaMetricChoice::ordinal_all || (metric == AlphaMetricChoice::auto_metric && d == Dim::IN))
            m = AlphaMetric::ordinal;
        report.rows.push_back({d, full_agreement_pct(units), krippendorff_alpha(units, m)});
    }
    return report;
}

// Generic labeled correlation matrix; cells may be undefined (rendered
// .00 in reports, carried as defined=false here).
struct CorrelationMatrix {
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    std::vector<std::vector<Corr>> cells;
    std::string method;

    const Corr& at(size_t r, size_t c) const { return cells[r][c]; }
};

// 14x14 Kendall tau-b between dimension pairs, computed per annotator
// over that annotator's per-item labels (IN binarized) and averaged
// element-wise. Annotators whose column is all-tied drop out of a cell's
// mean; a cell is undefined only if every annotator is.
inline CorrelationMatrix dimension_correlations(const std::vector<AnnotationRecord>& records) {
    std::map<std::string, std::vector<const AnnotationRecord*>> by_annotator;
    for (const auto& r : records) by_annotator[r.annotator_id].push_back(&r);
    if (by_annotator.empty()) throw std::invalid_argument("dimension_correlations: no records");

    CorrelationMatrix m;
    m.method = "kendall-tau-b, averaged over annotators";
    for (Dim d : kAllDims) {
        m.row_labels.emplace_back(dim_code(d));
        m.col_labels.emplace_back(dim_code(d));
    }
    std::vector<std::vector<double>> sums(kDimCount, std::vector<double>(kDimCount, 0.0));
    std::vector<std::vector<int>> counts(kDimCount, std::vector<int>(kDimCount, 0));

    for (auto& [annotator, recs] : by_annotator) {
        std::sort(recs.begin(), recs.end(),
                  [](const AnnotationRecord* a, const AnnotationRecord* b) { return a->argument_id < b->argument_id; });
        std::array<std::vector<double>, kDimCount> cols;
        for (const auto* r : recs)
            for (Dim d : kAllDims)
                cols[static_cast<size_t>(d)].push_back(
                    d == Dim::IN ? (binarize_in(r->in_rating) ? 1.0 : 0.0) : (r->flag(d) ? 1.0 : 0.0));
        for (int i = 0; i < kDimCount; ++i)
            for (int j = 0; j < kDimCount; ++j) {
                if (i == j) continue;
                const Corr t = kendall_tau_b(cols[static_cast<size_t>(i)], cols[static_cast<size_t>(j)]);
                if (t.defined) {
                    sums[static_cast<size_t>(i)][static_cast<size_t>(j)] += t.value;
                    counts[static_cast<size_t>(i)][static_cast<size_t>(j)]++;
                }
            }
    }
    m.cells.assign(kDimCount, std::vector<Corr>(kDimCount));
    for (int i = 0; i < kDimCount; ++i)
        for (int j = 0; j < kDimCount; ++j) {
            if (i == j) {
                m.cells[static_cast<size_t>(i)][static_cast<size_t>(j)] = {1.0, true};
            } else if (counts[static_cast<size_t>(i)][static_cast<size_t>(j)]) {
                m.cells[static_cast<size_t>(i)][static_cast<size_t>(j)] = {
                    sums[static_cast<size_t>(i)][static_cast<size_t>(j)] /
                        counts[static_cast<size_t>(i)][static_cast<size_t>(j)],
                    true};
            }
        }
    return m;
}

// Per-argument mean of each dimension's per-annotator binary label
// (IN binarized before averaging).
inline std::map<std::string, std::array<double, kDimCount>> mean_labels(
    const std::vector<AnnotationRecord>& records) {
    std::map<std::string, std::pair<std::array<double, kDimCount>, int>> acc;
    for (const auto& r : records) {
        auto& [sum, n] = acc[r.argument_id];
        for (Dim d : kAllDims)
            sum[static_cast<size_t>(d)] +=
                d == Dim::IN ? (binarize_in(r.in_rating) ? 1.0 : 0.0) : (r.flag(d) ? 1.0 : 0.0);
        n++;
    }
    std::map<std::string, std::array<double, kDimCount>> out;
    for (auto& [id, pair] : acc) {
        auto [sum, n] = pair;
        for (auto& v : sum) v /= n;
        out[id] = sum;
    }
    return out;
}

// Per-argument mean quality score per rated dimension.
inline std::map<std::string, std::map<std::string, double>> mean_ratings(
    const std::vector<QualityRating>& ratings) {
    std::map<std::string, std::map<std::string, std::pair<double, int>>> acc;
    for (const auto& r : ratings) {
        auto& [sum, n] = acc[r.argument_id][r.dimension_name];
        sum += r.score;
        n++;
    }
    std::map<std::string, std::map<std::string, double>> out;
    for (auto& [id, dims] : acc)
        for (auto& [dim, sn] : dims) out[id][dim] = sn.first / sn.second;
    return out;
}

// Tau-b between per-argument mean quality scores and per-argument mean
// inappropriateness labels, over the intersection of argument sets.
// Rows = quality dimensions (given order), columns = the 14 dimensions.
inline CorrelationMatrix external_correlations(const std::vector<AnnotationRecord>& records,
                                               const std::vector<QualityRating>& ratings,
                                               const std::vector<QualityDimInfo>& quality_dims) {
    const auto labels = mean_labels(records);
    const auto scores = mean_ratings(ratings);

    CorrelationMatrix m;
    m.method = "kendall-tau-b over argument means";
    for (const auto& q : quality_dims) m.row_labels.emplace_back(q.key);
    for (Dim d : kAllDims) m.col_labels.emplace_back(dim_code(d));
    m.cells.assign(quality_dims.size(), std::vector<Corr>(kDimCount));

    for (size_t qi = 0; qi < quality_dims.size(); ++qi) {
        std::vector<double> x;
        std::vector<std::array<double, kDimCount>> y;
        for (const auto& [arg, dims] : scores) {
            const auto it = dims.find(std::string(quality_dims[qi].key));
            const auto lab = labels.find(arg);
            if (it == dims.end() || lab == labels.end()) continue;
            x.push_back(it->second);
            y.push_back(lab->second);
        }
        if (x.size() < 2) throw std::invalid_argument("external_correlations: empty intersection for " +
                                                      std::string(quality_dims[qi].key));
        for (Dim d : kAllDims) {
            std::vector<double> col(y.size());
            for (size_t i = 0; i < y.size(); ++i) col[i] = y[i][static_cast<size_t>(d)];
            m.cells[qi][static_cast<size_t>(d)] = kendall_tau_b(x, col);
        }
    }
    return m;
}

// Tau-b between "pair carries this reason" indicators and the per-pair
// label difference (mean label of b - mean label of a), over all pairs
// with labels on both endpoints. Rows = reason catalog.
inline CorrelationMatrix pair_reason_correlations(const std::vector<PairReason>& pairs,
                                                  const std::vector<AnnotationRecord>& records) {
    const auto labels = mean_labels(records);

    struct PairDiff {
        std::string pair_id;
        std::array<double, kDimCount> diff;
    };
    std::vector<PairDiff> usable;
    std::map<std::string, std::set<std::string>> reasons_of;  // pair_id -> codes
    std::set<std::string> seen_pairs;
    for (const auto& p : pairs) {
        reasons_of[p.pair_id].insert(p.reason_code);
        if (seen_pairs.insert(p.pair_id).second) {
            const auto a = labels.find(p.more_convincing_id);
            const auto b = labels.find(p.less_convincing_id);
            if (a == labels.end() || b == labels.end()) continue;
            PairDiff d;
            d.pair_id = p.pair_id;
            for (Dim dim : kAllDims)
                d.diff[static_cast<size_t>(dim)] =
                    b->second[static_cast<size_t>(dim)] - a->second[static_cast<size_t>(dim)];
            usable.push_back(std::move(d));
        }
    }

    CorrelationMatrix m;
    m.method = "kendall-tau-b, reason indicator vs. label difference";
    for (const auto& r : pair_reason_catalog()) m.row_labels.emplace_back(r.code);
    for (Dim d : kAllDims) m.col_labels.emplace_back(dim_code(d));
    m.cells.assign(pair_reason_catalog().size(), std::vector<Corr>(kDimCount));
    if (usable.size() < 2) return m;  // all cells undefined

    for (size_t ri = 0; ri < pair_reason_catalog().size(); ++ri) {
        const std::string code(pair_reason_catalog()[ri].code);
        std::vector<double> indicator(usable.size(), 0.0);
        for (size_t i = 0; i < usable.size(); ++i)
            if (reasons_of[usable[i].pair_id].count(code)) indicator[i] = 1.0;
        for (Dim d : kAllDims) {
            std::vector<double> diff(usable.size());
            for (size_t i = 0; i < usable.size(); ++i) diff[i] = usable[i].diff[static_cast<size_t>(d)];
            m.cells[ri][static_cast<size_t>(d)] = kendall_tau_b(indicator, diff);
        }
    }
    return m;
}

// Inclusion-exclusion cell counts of arguments rated "low" (mean rating
// at or below the threshold) per subset of the requested dimensions.
// Key = bitmask over `dims` (bit i set = low on dims[i]); arguments low
// on nothing land in cell 0.
struct VennReport {
    std::vector<std::string> dims;
    std::map<uint32_t, size_t> cells;
    size_t arguments = 0;  // arguments carrying ratings for all requested dims

    size_t low_on(size_t dim_idx) const {
        size_t total = 0;
        for (const auto& [mask, count] : cells)
            if (mask & (1u << dim_idx)) total += count;
        return total;
    }

    // Sum of cells where all of `dim_idxs` are low.
    size_t overlap(const std::vector<size_t>& dim_idxs) const {
        size_t total = 0;
        for (const auto& [mask, count] : cells) {
            bool all = true;
            for (size_t i : dim_idxs) all &= (mask & (1u << i)) != 0;
            if (all) total += count;
        }
        return total;
    }
};

inline VennReport venn_overlap(const std::vector<QualityRating>& ratings,
                               const std::vector<std::string>& dims, double low_threshold = 1.0) {
    if (dims.size() > 20) throw std::invalid_argument("venn_overlap: too many dimensions");
    const auto means = mean_ratings(ratings);
    std::set<std::string> known;
    for (const auto& r : ratings) known.insert(r.dimension_name);
    for (const auto& d : dims)
        if (!known.count(d)) throw std::invalid_argument("venn_overlap: unknown dimension " + d);

    VennReport report;
    report.dims = dims;
    for (const auto& [arg, scores] : means) {
        uint32_t mask = 0;
        bool has_all = true;
        for (size_t i = 0; i < dims.size(); ++i) {
            const auto it = scores.find(dims[i]);
            if (it == scores.end()) { has_all = false; break; }
            if (it->second <= low_threshold) mask |= (1u << i);
        }
        if (!has_all) continue;
        report.arguments++;
        report.cells[mask]++;
    }
    return report;
}

// Nominal alpha between two label sources per dimension, the two
// matrices acting as two annotators over the shared argument set.
inline std::array<AlphaResult, kDimCount> compare_aggregations(const LabelMatrix& a, const LabelMatrix& b) {
    if (a.argument_ids != b.argument_ids)
        throw std::invalid_argument("compare_aggregations: argument sets differ");
    std::array<AlphaResult, kDimCount> out;
    for (Dim d : kAllDims) {
        std::vector<std::vector<double>> units;
        units.reserve(a.size());
        for (size_t i = 0; i < a.size(); ++i)
            units.push_back({a.label(i, d) ? 1.0 : 0.0, b.label(i, d) ? 1.0 : 0.0});
        out[static_cast<size_t>(d)] = krippendorff_alpha(units, AlphaMetric::nominal);
    }
    return out;
}

}  // namespace inapt
