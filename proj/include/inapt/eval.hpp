#pragma once
// Cross-validation protocol: 5x repeated 5-fold plans with iterative
// multi-label stratification, 70/10/20 train/dev/test per folding,
// class weights, random/majority baselines, two-class-macro F1 scoring,
// human upper bound and Wilcoxon significance verdicts. Model training
// itself happens out of process; predictions come back as files.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "inapt/aggregate.hpp"
#include "inapt/rng.hpp"
#include "inapt/stats.hpp"
#include "inapt/taxonomy.hpp"
#include "inapt/tsv.hpp"

namespace inapt {

struct FoldSplit {
    std::vector<std::string> train, dev, test;  // each sorted
};

struct FoldPlan {
    int repetitions = 5;
    int folds = 5;
    uint64_t seed = 0;
    std::vector<std::vector<FoldSplit>> splits;  // [repetition][fold]

    const FoldSplit& at(int rep, int fold) const {
        return splits[static_cast<size_t>(rep)][static_cast<size_t>(fold)];
    }
};

namespace detail {

// Iterative multi-label stratification (rarest label first): each item
// goes to the group with the greatest remaining desire for the item's
// scarcest label; ties fall to the group with more remaining capacity,
// then to a seeded draw. Items without positive labels fill capacity.
inline std::vector<std::vector<size_t>> iterative_stratify(
    const std::vector<std::array<uint8_t, kDimCount>>& labels, const std::vector<size_t>& items,
    const std::vector<size_t>& capacities, Rng rng) {
    const size_t groups = capacities.size();
    const size_t total = items.size();
    std::vector<std::vector<size_t>> assigned(groups);
    std::vector<double> cap(groups);
    std::vector<std::array<double, kDimCount>> desire(groups);
    std::array<size_t, kDimCount> positives{};
    for (size_t it : items)
        for (int d = 0; d < kDimCount; ++d) positives[static_cast<size_t>(d)] += labels[it][static_cast<size_t>(d)];
    for (size_t g = 0; g < groups; ++g) {
        cap[g] = static_cast<double>(capacities[g]);
        for (int d = 0; d < kDimCount; ++d)
            desire[g][static_cast<size_t>(d)] = static_cast<double>(capacities[g]) / static_cast<double>(total) *
                                                static_cast<double>(positives[static_cast<size_t>(d)]);
    }

    std::vector<size_t> order(items);
    rng.shuffle(order);
    std::vector<bool> done(labels.size(), false);

    auto place = [&](size_t item, int label) {
        size_t best = groups;
        for (size_t g = 0; g < groups; ++g) {
            if (cap[g] < 1.0) continue;
            if (best == groups) { best = g; continue; }
            double a = label >= 0 ? desire[g][static_cast<size_t>(label)] : cap[g];
            double b = label >= 0 ? desire[best][static_cast<size_t>(label)] : cap[best];
            if (a > b) { best = g; continue; }
            if (a == b) {
                if (cap[g] > cap[best]) best = g;
                else if (cap[g] == cap[best] && rng.next_bool()) best = g;
            }
        }
        if (best == groups) throw std::logic_error("iterative_stratify: capacities exhausted");
        assigned[best].push_back(item);
        done[item] = true;
        cap[best] -= 1.0;
        for (int d = 0; d < kDimCount; ++d)
            if (labels[item][static_cast<size_t>(d)]) desire[best][static_cast<size_t>(d)] -= 1.0;
    };

    while (true) {
        std::array<size_t, kDimCount> remaining{};
        size_t pending = 0;
        for (size_t it : order) {
            if (done[it]) continue;
            ++pending;
            for (int d = 0; d < kDimCount; ++d)
                remaining[static_cast<size_t>(d)] += labels[it][static_cast<size_t>(d)];
        }
        if (!pending) return assigned;
        int rarest = -1;
        for (int d = 0; d < kDimCount; ++d)
            if (remaining[static_cast<size_t>(d)] > 0 &&
                (rarest < 0 || remaining[static_cast<size_t>(d)] < remaining[static_cast<size_t>(rarest)]))
                rarest = d;
        if (rarest < 0) break;  // only label-free items left
        for (size_t it : order)
            if (!done[it] && labels[it][static_cast<size_t>(rarest)]) place(it, rarest);
    }
    for (size_t it : order)
        if (!done[it]) place(it, -1);
    return assigned;
}

// n split into `parts` sizes differing by at most one, larger parts first.
inline std::vector<size_t> spread(size_t n, size_t parts) {
    std::vector<size_t> sizes(parts, n / parts);
    for (size_t i = 0; i < n % parts; ++i) sizes[i]++;
    return sizes;
}

// Post-pass on the greedy assignment: 1-for-1 swaps between groups until
// every per-dimension positive rate sits within the tolerance of the
// global rate (or no swap helps). Sizes never change; fully deterministic.
inline void rebalance(const std::vector<std::array<uint8_t, kDimCount>>& labels,
                      std::vector<std::vector<size_t>>& groups, double tolerance_pts) {
    const size_t g_n = groups.size();
    size_t total = 0;
    std::array<double, kDimCount> global_pct{};
    for (const auto& grp : groups) {
        total += grp.size();
        for (size_t it : grp)
            for (int d = 0; d < kDimCount; ++d) global_pct[static_cast<size_t>(d)] += labels[it][static_cast<size_t>(d)];
    }
    for (auto& v : global_pct) v = 100.0 * v / static_cast<double>(total);

    std::vector<std::array<double, kDimCount>> counts(g_n, std::array<double, kDimCount>{});
    for (size_t g = 0; g < g_n; ++g)
        for (size_t it : groups[g])
            for (int d = 0; d < kDimCount; ++d)
                counts[g][static_cast<size_t>(d)] += labels[it][static_cast<size_t>(d)];

    auto dev = [&](size_t g, int d) {
        return 100.0 * counts[g][static_cast<size_t>(d)] / static_cast<double>(groups[g].size()) -
               global_pct[static_cast<size_t>(d)];
    };
    const double slack = tolerance_pts * 0.45;  // aim well inside the tolerance
    auto objective = [&]() {
        double j = 0.0;
        for (size_t g = 0; g < g_n; ++g)
            for (int d = 0; d < kDimCount; ++d) {
                const double over = std::fabs(dev(g, d)) - slack;
                if (over > 0) j += over * over;
            }
        return j;
    };

    for (int iter = 0; iter < 4096; ++iter) {
        double worst = 0.0;
        size_t gw = 0;
        int dw = -1;
        for (size_t g = 0; g < g_n; ++g)
            for (int d = 0; d < kDimCount; ++d)
                if (std::fabs(dev(g, d)) > worst) {
                    worst = std::fabs(dev(g, d));
                    gw = g;
                    dw = d;
                }
        if (dw < 0 || worst <= tolerance_pts * 0.9) break;

        // swap a positive item out of the over-rate group for a negative
        // item from the most under-rate group (or the reverse)
        const bool over = dev(gw, dw) > 0;
        size_t gc = gw;
        double best_opposite = over ? 1e9 : -1e9;
        for (size_t g = 0; g < g_n; ++g) {
            if (g == gw) continue;
            const double v = dev(g, dw);
            if (over ? v < best_opposite : v > best_opposite) {
                best_opposite = v;
                gc = g;
            }
        }
        const size_t src = over ? gw : gc;  // donates a positive item
        const size_t dst = over ? gc : gw;

        // candidate choice: remove the most over-represented label combo
        // from each side
        auto combo_score = [&](size_t g, size_t item) {
            double s = 0.0;
            for (int d = 0; d < kDimCount; ++d)
                if (labels[item][static_cast<size_t>(d)]) s += dev(g, d);
            return s;
        };
        long long a_idx = -1, b_idx = -1;
        double a_best = -1e18, b_best = -1e18;
        for (size_t i = 0; i < groups[src].size(); ++i) {
            if (!labels[groups[src][i]][static_cast<size_t>(dw)]) continue;
            const double s = combo_score(src, groups[src][i]);
            if (s > a_best) { a_best = s; a_idx = static_cast<long long>(i); }
        }
        for (size_t i = 0; i < groups[dst].size(); ++i) {
            if (labels[groups[dst][i]][static_cast<size_t>(dw)]) continue;
            const double s = combo_score(dst, groups[dst][i]);
            if (s > b_best) { b_best = s; b_idx = static_cast<long long>(i); }
        }
        if (a_idx < 0 || b_idx < 0) break;

        const double before = objective();
        auto swap_once = [&]() {
            const size_t x = groups[src][static_cast<size_t>(a_idx)];
            const size_t y = groups[dst][static_cast<size_t>(b_idx)];
            for (int d = 0; d < kDimCount; ++d) {
                counts[src][static_cast<size_t>(d)] +=
                    static_cast<double>(labels[y][static_cast<size_t>(d)]) - labels[x][static_cast<size_t>(d)];
                counts[dst][static_cast<size_t>(d)] +=
                    static_cast<double>(labels[x][static_cast<size_t>(d)]) - labels[y][static_cast<size_t>(d)];
            }
            std::swap(groups[src][static_cast<size_t>(a_idx)], groups[dst][static_cast<size_t>(b_idx)]);
        };
        swap_once();
        if (objective() >= before - 1e-12) {
            swap_once();  // revert; no further progress possible here
            break;
        }
    }
}

}  // namespace detail

inline FoldPlan make_folds(const LabelMatrix& gold, uint64_t seed, int repetitions = 5, int folds = 5) {
    const size_t n = gold.size();
    if (n < static_cast<size_t>(folds) * 2) throw std::invalid_argument("make_folds: corpus too small");
    std::vector<size_t> all(n);
    for (size_t i = 0; i < n; ++i) all[i] = i;

    FoldPlan plan;
    plan.repetitions = repetitions;
    plan.folds = folds;
    plan.seed = seed;
    Rng root(seed);
    const size_t dev_target = static_cast<size_t>(std::llround(0.1 * static_cast<double>(n)));

    for (int rep = 0; rep < repetitions; ++rep) {
        Rng rep_rng = root.fork(static_cast<uint64_t>(rep));
        auto test_sets = detail::iterative_stratify(gold.cells, all,
                                                    detail::spread(n, static_cast<size_t>(folds)),
                                                    rep_rng.fork(0));
        detail::rebalance(gold.cells, test_sets, 2.0);
        std::vector<FoldSplit> rep_splits;
        for (int fold = 0; fold < folds; ++fold) {
            const auto& test = test_sets[static_cast<size_t>(fold)];
            std::vector<bool> in_test(n, false);
            for (size_t i : test) in_test[i] = true;
            std::vector<size_t> pool;
            for (size_t i = 0; i < n; ++i)
                if (!in_test[i]) pool.push_back(i);
            const auto dev_train = detail::iterative_stratify(
                gold.cells, pool, {dev_target, pool.size() - dev_target},
                rep_rng.fork(1 + static_cast<uint64_t>(fold)));
            FoldSplit split;
            auto ids = [&](const std::vector<size_t>& idxs) {
                std::vector<std::string> out;
                out.reserve(idxs.size());
                for (size_t i : idxs) out.push_back(gold.argument_ids[i]);
                std::sort(out.begin(), out.end());
                return out;
            };
            split.test = ids(test);
            split.dev = ids(dev_train[0]);
            split.train = ids(dev_train[1]);
            rep_splits.push_back(std::move(split));
        }
        plan.splits.push_back(std::move(rep_splits));
    }
    return plan;
}

// Violations of the plan invariants (partition per repetition, 70/10/20
// within one argument, per-dimension test-fold rates within the
// tolerance). Empty = plan holds.
inline std::vector<std::string> check_plan(const FoldPlan& plan, const LabelMatrix& gold,
                                           double rate_tolerance_pts = 2.0) {
    std::vector<std::string> problems;
    const size_t n = gold.size();
    std::array<double, kDimCount> global{};
    for (Dim d : kAllDims)
        global[static_cast<size_t>(d)] = 100.0 * static_cast<double>(gold.yes_count(d)) / static_cast<double>(n);

    for (int rep = 0; rep < plan.repetitions; ++rep) {
        std::set<std::string> seen;
        size_t covered = 0;
        for (int fold = 0; fold < plan.folds; ++fold) {
            const auto& split = plan.at(rep, fold);
            covered += split.test.size();
            for (const auto& id : split.test)
                if (!seen.insert(id).second)
                    problems.push_back("rep " + std::to_string(rep) + ": argument in two test folds: " + id);
            // disjointness within the folding
            std::set<std::string> fold_ids(split.test.begin(), split.test.end());
            for (const auto& id : split.dev)
                if (!fold_ids.insert(id).second)
                    problems.push_back("rep " + std::to_string(rep) + " fold " + std::to_string(fold) +
                                       ": dev overlaps: " + id);
            for (const auto& id : split.train)
                if (!fold_ids.insert(id).second)
                    problems.push_back("rep " + std::to_string(rep) + " fold " + std::to_string(fold) +
                                       ": train overlaps: " + id);
            if (fold_ids.size() != n)
                problems.push_back("rep " + std::to_string(rep) + " fold " + std::to_string(fold) +
                                   ": folding does not cover the corpus");
            auto off = [&](double actual, double target, const char* what) {
                if (std::fabs(actual - target) > 1.0)
                    problems.push_back("rep " + std::to_string(rep) + " fold " + std::to_string(fold) + ": " +
                                       what + " size " + std::to_string(actual) + " vs target " +
                                       std::to_string(target));
            };
            off(static_cast<double>(split.test.size()), 0.2 * static_cast<double>(n), "test");
            off(static_cast<double>(split.dev.size()), 0.1 * static_cast<double>(n), "dev");
            off(static_cast<double>(split.train.size()), 0.7 * static_cast<double>(n), "train");
            for (Dim d : kAllDims) {
                size_t yes = 0;
                for (const auto& id : split.test) {
                    const auto row = gold.row_of(id);
                    if (row >= 0 && gold.label(static_cast<size_t>(row), d)) ++yes;
                }
                const double rate = 100.0 * static_cast<double>(yes) / static_cast<double>(split.test.size());
                if (std::fabs(rate - global[static_cast<size_t>(d)]) > rate_tolerance_pts)
                    problems.push_back("rep " + std::to_string(rep) + " fold " + std::to_string(fold) + ": " +
                                       std::string(dim_code(d)) + " rate off by " +
                                       std::to_string(rate - global[static_cast<size_t>(d)]) + " pts");
            }
        }
        if (covered != n)
            problems.push_back("rep " + std::to_string(rep) + ": test folds are not a partition");
    }
    return problems;
}

struct ClassWeights {
    std::array<double, kDimCount> weight{};
    std::vector<std::string> warnings;
};

// weight_d = negatives/positives over the given training subset, clamped
// to [0.1, 10]; zero positives clamp to the maximum with a warning.
inline ClassWeights class_weights(const LabelMatrix& gold, const std::vector<std::string>& train_ids) {
    if (train_ids.empty()) throw std::invalid_argument("class_weights: empty training set");
    ClassWeights out;
    for (Dim d : kAllDims) {
        size_t pos = 0;
        for (const auto& id : train_ids) {
            const auto row = gold.row_of(id);
            if (row < 0) throw std::invalid_argument("class_weights: unknown argument " + id);
            if (gold.label(static_cast<size_t>(row), d)) ++pos;
        }
        const size_t neg = train_ids.size() - pos;
        double w;
        if (pos == 0) {
            w = 10.0;
            out.warnings.push_back(std::string(dim_code(d)) + ": no positive training instances, weight clamped");
        } else {
            w = std::clamp(static_cast<double>(neg) / static_cast<double>(pos), 0.1, 10.0);
        }
        out.weight[static_cast<size_t>(d)] = w;
    }
    return out;
}

// External predictions: one 14-label row per (repetition, fold, argument).
struct PredictionSet {
    std::string approach;
    std::map<std::tuple<int, int, std::string>, std::array<uint8_t, kDimCount>> rows;
};

inline PredictionSet random_baseline(const FoldPlan& plan, uint64_t seed) {
    PredictionSet out;
    out.approach = "random";
    Rng rng(seed);
    for (int rep = 0; rep < plan.repetitions; ++rep)
        for (int fold = 0; fold < plan.folds; ++fold)
            for (const auto& id : plan.at(rep, fold).test) {
                std::array<uint8_t, kDimCount> row{};
                for (int d = 0; d < kDimCount; ++d) row[static_cast<size_t>(d)] = rng.next_bool() ? 1 : 0;
                out.rows[{rep, fold, id}] = row;
            }
    return out;
}

// Constant per fold: the training-set majority label per dimension
// (exact 50/50 falls to no).
inline PredictionSet majority_baseline(const FoldPlan& plan, const LabelMatrix& gold) {
    PredictionSet out;
    out.approach = "majority";
    for (int rep = 0; rep < plan.repetitions; ++rep)
        for (int fold = 0; fold < plan.folds; ++fold) {
            const auto& split = plan.at(rep, fold);
            std::array<uint8_t, kDimCount> majority{};
            for (Dim d : kAllDims) {
                size_t pos = 0;
                for (const auto& id : split.train) {
                    const auto row = gold.row_of(id);
                    if (row < 0) throw std::invalid_argument("majority_baseline: unknown argument " + id);
                    if (gold.label(static_cast<size_t>(row), d)) ++pos;
                }
                majority[static_cast<size_t>(d)] = (2 * pos > split.train.size()) ? 1 : 0;
            }
            for (const auto& id : split.test) out.rows[{rep, fold, id}] = majority;
        }
    return out;
}

struct ScoreReport {
    std::string approach;
    std::array<double, kDimCount> per_dim{};       // mean over folds
    double macro = 0.0;                            // mean over dimensions
    std::vector<std::array<double, kDimCount>> per_fold_dim;
    std::vector<double> per_fold_macro;
};

namespace detail {

// F1 of one class. Undefined cases: no true and no predicted -> 1.0;
// one side empty while the other is not -> 0.0.
inline double class_f1(size_t tp, size_t fp, size_t fn) {
    if (tp + fp == 0 && tp + fn == 0) return 1.0;
    if (tp + fp == 0 || tp + fn == 0) return 0.0;
    if (tp == 0) return 0.0;
    const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    const double recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    return 2.0 * precision * recall / (precision + recall);
}

// Two-class macro F1 per dimension from paired gold/predicted rows.
template <typename GoldAt, typename PredAt>
std::array<double, kDimCount> fold_scores(size_t n, GoldAt&& gold_at, PredAt&& pred_at) {
    std::array<double, kDimCount> scores{};
    for (int d = 0; d < kDimCount; ++d) {
        size_t tp = 0, fp = 0, fn = 0, tn = 0;
        for (size_t i = 0; i < n; ++i) {
            const bool g = gold_at(i, d), p = pred_at(i, d);
            if (g && p) ++tp;
            else if (!g && p) ++fp;
            else if (g && !p) ++fn;
            else ++tn;
        }
        const double f1_yes = class_f1(tp, fp, fn);
        const double f1_no = class_f1(tn, fn, fp);
        scores[static_cast<size_t>(d)] = (f1_yes + f1_no) / 2.0;
    }
    return scores;
}

inline void finalize(ScoreReport& report) {
    const size_t folds = report.per_fold_dim.size();
    for (const auto& fold : report.per_fold_dim) {
        double macro = 0.0;
        for (double v : fold) macro += v;
        report.per_fold_macro.push_back(macro / kDimCount);
    }
    for (int d = 0; d < kDimCount; ++d) {
        double sum = 0.0;
        for (const auto& fold : report.per_fold_dim) sum += fold[static_cast<size_t>(d)];
        report.per_dim[static_cast<size_t>(d)] = sum / static_cast<double>(folds);
    }
    double macro = 0.0;
    for (double v : report.per_dim) macro += v;
    report.macro = macro / kDimCount;
}

}  // namespace detail

// Per dimension per fold: two-class macro F1 over the fold's test set;
// per-dimension score = mean over the plan's folds; macro = mean over
// dimensions. Coverage gaps are enumerated and fatal.
inline ScoreReport score(const PredictionSet& predictions, const LabelMatrix& gold, const FoldPlan& plan) {
    std::vector<std::string> gaps;
    for (int rep = 0; rep < plan.repetitions; ++rep)
        for (int fold = 0; fold < plan.folds; ++fold)
            for (const auto& id : plan.at(rep, fold).test)
                if (!predictions.rows.count({rep, fold, id}))
                    gaps.push_back("rep " + std::to_string(rep) + " fold " + std::to_string(fold) + ": " + id);
    if (!gaps.empty()) {
        std::string msg = "score: " + std::to_string(gaps.size()) + " missing predictions:";
        for (size_t i = 0; i < gaps.size() && i < 5; ++i) msg += ' ' + gaps[i] + ';';
        throw std::invalid_argument(msg);
    }

    ScoreReport report;
    report.approach = predictions.approach;
    for (int rep = 0; rep < plan.repetitions; ++rep)
        for (int fold = 0; fold < plan.folds; ++fold) {
            const auto& test = plan.at(rep, fold).test;
            std::vector<const std::array<uint8_t, kDimCount>*> gold_rows, pred_rows;
            for (const auto& id : test) {
                const auto row = gold.row_of(id);
                if (row < 0) throw std::invalid_argument("score: argument missing from gold: " + id);
                gold_rows.push_back(&gold.cells[static_cast<size_t>(row)]);
                pred_rows.push_back(&predictions.rows.at({rep, fold, id}));
            }
            report.per_fold_dim.push_back(detail::fold_scores(
                test.size(),
                [&](size_t i, int d) { return (*gold_rows[i])[static_cast<size_t>(d)] != 0; },
                [&](size_t i, int d) { return (*pred_rows[i])[static_cast<size_t>(d)] != 0; }));
        }
    detail::finalize(report);
    return report;
}

// Each annotator in isolation against the gold labels over the full
// corpus (IN binarized), then per-dimension F1 averaged over annotators.
// The per-fold rows of the report hold one row per annotator.
inline ScoreReport human_performance(const std::vector<AnnotationRecord>& records, const LabelMatrix& gold,
                                     std::vector<std::string>* warnings = nullptr) {
    std::map<std::string, std::map<std::string, const AnnotationRecord*>> by_annotator;
    for (const auto& r : records) by_annotator[r.annotator_id][r.argument_id] = &r;
    if (by_annotator.empty()) throw std::invalid_argument("human_performance: no records");

    ScoreReport report;
    report.approach = "human";
    for (const auto& [annotator, rows] : by_annotator) {
        std::vector<const AnnotationRecord*> recs;
        std::vector<size_t> gold_rows;
        size_t missing = 0;
        for (size_t i = 0; i < gold.size(); ++i) {
            const auto it = rows.find(gold.argument_ids[i]);
            if (it == rows.end()) { ++missing; continue; }
            recs.push_back(it->second);
            gold_rows.push_back(i);
        }
        if (missing && warnings)
            warnings->push_back(annotator + ": " + std::to_string(missing) +
                                " arguments not annotated, scored on covered subset");
        if (recs.empty()) continue;
        report.per_fold_dim.push_back(detail::fold_scores(
            recs.size(), [&](size_t i, int d) { return gold.label(gold_rows[i], static_cast<Dim>(d)); },
            [&](size_t i, int d) {
                const Dim dim = static_cast<Dim>(d);
                return dim == Dim::IN ? binarize_in(recs[i]->in_rating) : recs[i]->flag(dim);
            }));
    }
    detail::finalize(report);
    return report;
}

struct SignificanceVerdict {
    WilcoxonResult test;
    double mean_a = 0.0;
    double mean_b = 0.0;
    bool significant = false;
};

// Wilcoxon signed-rank over the paired per-fold macro-F1 values.
inline SignificanceVerdict significance(const ScoreReport& a, const ScoreReport& b,
                                        double alpha_level = 0.05) {
    if (a.per_fold_macro.size() != b.per_fold_macro.size() || a.per_fold_macro.empty())
        throw std::invalid_argument("significance: reports built on different plans");
    SignificanceVerdict v;
    v.test = wilcoxon_signed_rank(a.per_fold_macro, b.per_fold_macro, alpha_level);
    for (double x : a.per_fold_macro) v.mean_a += x;
    for (double x : b.per_fold_macro) v.mean_b += x;
    v.mean_a /= static_cast<double>(a.per_fold_macro.size());
    v.mean_b /= static_cast<double>(b.per_fold_macro.size());
    v.significant = v.test.tested && v.test.significant;
    return v;
}

// --- protocol files ---

// folds.tsv: repetition fold split argument_id
inline void write_fold_plan(std::ostream& out, const FoldPlan& plan) {
    out << join_tsv({"repetition", "fold", "split", "argument_id"}) << '\n';
    for (int rep = 0; rep < plan.repetitions; ++rep)
        for (int fold = 0; fold < plan.folds; ++fold) {
            const auto& split = plan.at(rep, fold);
            auto emit = [&](const char* name, const std::vector<std::string>& ids) {
                for (const auto& id : ids)
                    out << join_tsv({std::to_string(rep), std::to_string(fold), name, id}) << '\n';
            };
            emit("train", split.train);
            emit("dev", split.dev);
            emit("test", split.test);
        }
}

inline FoldPlan read_fold_plan(std::istream& in) {
    std::string line;
    if (!read_line(in, line) || split_tsv(line) != std::vector<std::string>{"repetition", "fold", "split", "argument_id"})
        throw std::runtime_error("fold plan: bad header");
    FoldPlan plan;
    plan.repetitions = 0;
    plan.folds = 0;
    std::map<std::pair<int, int>, FoldSplit> splits;
    size_t line_no = 1;
    while (read_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split_tsv(line);
        if (cells.size() != 4) throw std::runtime_error("fold plan line " + std::to_string(line_no));
        const auto rep = parse_int(cells[0]), fold = parse_int(cells[1]);
        if (!rep || !fold) throw std::runtime_error("fold plan line " + std::to_string(line_no));
        auto& split = splits[{static_cast<int>(*rep), static_cast<int>(*fold)}];
        if (cells[2] == "train") split.train.push_back(cells[3]);
        else if (cells[2] == "dev") split.dev.push_back(cells[3]);
        else if (cells[2] == "test") split.test.push_back(cells[3]);
        else throw std::runtime_error("fold plan line " + std::to_string(line_no) + ": bad split " + cells[2]);
        plan.repetitions = std::max(plan.repetitions, static_cast<int>(*rep) + 1);
        plan.folds = std::max(plan.folds, static_cast<int>(*fold) + 1);
    }
    plan.splits.assign(static_cast<size_t>(plan.repetitions),
                       std::vector<FoldSplit>(static_cast<size_t>(plan.folds)));
    for (auto& [key, split] : splits) {
        std::sort(split.train.begin(), split.train.end());
        std::sort(split.dev.begin(), split.dev.end());
        std::sort(split.test.begin(), split.test.end());
        plan.splits[static_cast<size_t>(key.first)][static_cast<size_t>(key.second)] = std::move(split);
    }
    return plan;
}

// predictions.tsv: repetition fold argument_id + 14 binary columns
inline void write_predictions(std::ostream& out, const PredictionSet& preds) {
    std::vector<std::string> header = {"repetition", "fold", "argument_id"};
    for (Dim d : kAllDims) header.emplace_back(dim_code(d));
    out << join_tsv(header) << '\n';
    for (const auto& [key, row] : preds.rows) {
        std::vector<std::string> cells = {std::to_string(std::get<0>(key)), std::to_string(std::get<1>(key)),
                                          std::get<2>(key)};
        for (int d = 0; d < kDimCount; ++d) cells.emplace_back(row[static_cast<size_t>(d)] ? "1" : "0");
        out << join_tsv(cells) << '\n';
    }
}

inline PredictionSet read_predictions(std::istream& in, const std::string& approach) {
    std::string line;
    std::vector<std::string> expect = {"repetition", "fold", "argument_id"};
    for (Dim d : kAllDims) expect.emplace_back(dim_code(d));
    if (!read_line(in, line) || split_tsv(line) != expect)
        throw std::runtime_error("predictions: bad header");
    PredictionSet preds;
    preds.approach = approach;
    size_t line_no = 1;
    while (read_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split_tsv(line);
        if (cells.size() != expect.size())
            throw std::runtime_error("predictions line " + std::to_string(line_no) + ": wrong column count");
        const auto rep = parse_int(cells[0]), fold = parse_int(cells[1]);
        if (!rep || !fold) throw std::runtime_error("predictions line " + std::to_string(line_no));
        std::array<uint8_t, kDimCount> row{};
        for (int d = 0; d < kDimCount; ++d) {
            const auto& c = cells[static_cast<size_t>(d) + 3];
            if (c != "0" && c != "1")
                throw std::runtime_error("predictions line " + std::to_string(line_no) + ": cells must be 0/1");
            row[static_cast<size_t>(d)] = (c == "1") ? 1 : 0;
        }
        preds.rows[{static_cast<int>(*rep), static_cast<int>(*fold), cells[2]}] = row;
    }
    return preds;
}

// weights.tsv: dimension weight
inline void write_weights(std::ostream& out, const ClassWeights& weights) {
    out << join_tsv({"dimension", "weight"}) << '\n';
    char buf[32];
    for (Dim d : kAllDims) {
        std::snprintf(buf, sizeof buf, "%.6g", weights.weight[static_cast<size_t>(d)]);
        out << join_tsv({std::string(dim_code(d)), buf}) << '\n';
    }
}

}  // namespace inapt
