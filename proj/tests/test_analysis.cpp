#include "inapt/analysis.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "inapt/rng.hpp"
#include "testutil.hpp"

using namespace inapt;

namespace {

AnnotationRecord rec_with(const std::string& arg, const std::string& ann, int in,
                          const std::vector<Dim>& yes) {
    AnnotationRecord r;
    r.argument_id = arg;
    r.annotator_id = ann;
    r.in_rating = in;
    for (Dim d : kAllDims)
        if (d != Dim::IN) r.set_flag(d, false);
    for (Dim d : yes) r.set_flag(d, true);
    return r;
}

}  // namespace

TEST(FullAgreementOp, RawThreeLevelScale) {
    std::vector<AnnotationRecord> records = {
        rec_with("a1", "x", 1, {Dim::TE}), rec_with("a1", "y", 2, {Dim::TE}),  // both binarize yes, differ raw
        rec_with("a2", "x", 3, {}), rec_with("a2", "y", 3, {}),
    };
    EXPECT_NEAR(full_agreement(records, Dim::IN), 50.0, 1e-12);  // raw scale: only a2 agrees
    EXPECT_NEAR(full_agreement(records, Dim::TE), 100.0, 1e-12);
    EXPECT_THROW(full_agreement({}, Dim::IN), std::invalid_argument);
}

TEST(AgreementReportOp, ShapeAndDegenerateFlag) {
    std::vector<AnnotationRecord> records;
    for (const auto* arg : {"a1", "a2", "a3"})
        for (const auto* ann : {"x", "y", "z"}) records.push_back(rec_with(arg, ann, 3, {}));
    const auto report = agreement_report(records);
    ASSERT_EQ(report.rows.size(), 14u);
    EXPECT_EQ(report.annotators, 3u);
    EXPECT_EQ(report.items, 3u);
    for (const auto& row : report.rows) {
        EXPECT_NEAR(row.full_agreement_pct, 100.0, 1e-12);
        EXPECT_EQ(row.alpha.alpha, 1.0);
        EXPECT_TRUE(row.alpha.degenerate);  // single category everywhere
    }
}

TEST(AgreementReportOp, MetricChoiceMatters) {
    // 3-level IN disagreements where ordinal and nominal alpha differ
    std::vector<AnnotationRecord> records;
    Rng rng(5);
    for (int i = 0; i < 12; ++i) {
        const std::string arg = "a" + std::to_string(i);
        for (const auto* ann : {"x", "y", "z"}) {
            const int rating = 1 + static_cast<int>(rng.next_below(3));
            records.push_back(rec_with(arg, ann, rating, rating == 3 ? std::vector<Dim>{} : std::vector<Dim>{Dim::MI}));
        }
    }
    const auto auto_choice = agreement_report(records, AlphaMetricChoice::auto_metric);
    const auto nominal = agreement_report(records, AlphaMetricChoice::nominal_all);
    const auto ordinal = agreement_report(records, AlphaMetricChoice::ordinal_all);
    EXPECT_NEAR(auto_choice.rows[0].alpha.alpha, ordinal.rows[0].alpha.alpha, 1e-12);
    EXPECT_NE(nominal.rows[0].alpha.alpha, ordinal.rows[0].alpha.alpha);
    // binary dimensions: ordinal == nominal (single category pair)
    for (size_t i = 1; i < 14; ++i)
        EXPECT_NEAR(nominal.rows[i].alpha.alpha, ordinal.rows[i].alpha.alpha, 1e-12);
}

TEST(DimensionCorrelations, DiagonalAndSymmetry) {
    const auto records = testutil::synthetic_records(60, 3, 41);
    const auto m = dimension_correlations(records);
    ASSERT_EQ(m.cells.size(), 14u);
    for (int i = 0; i < 14; ++i) {
        EXPECT_TRUE(m.cells[static_cast<size_t>(i)][static_cast<size_t>(i)].defined);
        EXPECT_NEAR(m.cells[static_cast<size_t>(i)][static_cast<size_t>(i)].value, 1.0, 1e-12);
        for (int j = 0; j < 14; ++j) {
            ASSERT_EQ(m.cells[static_cast<size_t>(i)][static_cast<size_t>(j)].defined,
                      m.cells[static_cast<size_t>(j)][static_cast<size_t>(i)].defined);
            if (m.cells[static_cast<size_t>(i)][static_cast<size_t>(j)].defined)
                ASSERT_NEAR(m.cells[static_cast<size_t>(i)][static_cast<size_t>(j)].value,
                            m.cells[static_cast<size_t>(j)][static_cast<size_t>(i)].value, 1e-12);
        }
    }
}

TEST(DimensionCorrelations, UndefinedWhenAnnotatorColumnsConstant) {
    // nobody ever marks RU -> tau undefined for every annotator -> cell undefined
    std::vector<AnnotationRecord> records;
    Rng rng(6);
    for (int i = 0; i < 10; ++i)
        for (const auto* ann : {"x", "y", "z"}) {
            const bool bad = rng.next_bool();
            records.push_back(rec_with("a" + std::to_string(i), ann, bad ? 2 : 3,
                                       bad ? std::vector<Dim>{Dim::TE} : std::vector<Dim>{}));
        }
    const auto m = dimension_correlations(records);
    const size_t ru = static_cast<size_t>(Dim::RU);
    const size_t in = static_cast<size_t>(Dim::IN);
    EXPECT_FALSE(m.cells[in][ru].defined);
    EXPECT_TRUE(m.cells[in][static_cast<size_t>(Dim::TE)].defined);
}

TEST(MeanLabels, BinarizesBeforeAveraging) {
    std::vector<AnnotationRecord> records = {
        rec_with("a1", "x", 1, {Dim::TE}),
        rec_with("a1", "y", 2, {}),
        rec_with("a1", "z", 3, {}),
    };
    const auto means = mean_labels(records);
    EXPECT_NEAR(means.at("a1")[static_cast<size_t>(Dim::IN)], 2.0 / 3.0, 1e-12);
    EXPECT_NEAR(means.at("a1")[static_cast<size_t>(Dim::TE)], 1.0 / 3.0, 1e-12);
}

TEST(ExternalCorrelations, PerfectMonotoneToy) {
    // quality score decreasing exactly as the IN mean increases -> tau = -1
    std::vector<AnnotationRecord> records;
    std::vector<QualityRating> ratings;
    const int n = 3;
    for (int i = 0; i < n; ++i) {
        const std::string arg = "a" + std::to_string(i);
        for (int a = 0; a < 3; ++a) {
            const bool yes = a < i;  // i of 3 annotators say inappropriate
            records.push_back(rec_with(arg, "ann" + std::to_string(a), yes ? 1 : 3,
                                       yes ? std::vector<Dim>{Dim::TE} : std::vector<Dim>{}));
        }
        ratings.push_back({arg, "appropriateness", "r1", 3 - i});
    }
    const auto m = external_correlations(records, ratings,
                                         {{QualityDimInfo{"appropriateness", "Appropriateness"}}});
    const auto& cell = m.cells[0][static_cast<size_t>(Dim::IN)];
    ASSERT_TRUE(cell.defined);
    EXPECT_NEAR(cell.value, -1.0, 1e-12);
}

TEST(ExternalCorrelations, ConstantQualityColumnUndefined) {
    std::vector<AnnotationRecord> records;
    std::vector<QualityRating> ratings;
    for (int i = 0; i < 4; ++i) {
        const std::string arg = "a" + std::to_string(i);
        for (int a = 0; a < 3; ++a)
            records.push_back(rec_with(arg, "ann" + std::to_string(a), i % 2 ? 2 : 3,
                                       i % 2 ? std::vector<Dim>{Dim::MI} : std::vector<Dim>{}));
        ratings.push_back({arg, "clarity", "r1", 2});  // constant
    }
    const auto m = external_correlations(records, ratings, {{QualityDimInfo{"clarity", "Clarity"}}});
    EXPECT_FALSE(m.cells[0][static_cast<size_t>(Dim::IN)].defined);
}

TEST(ExternalCorrelations, EmptyIntersectionThrows) {
    std::vector<AnnotationRecord> records = {rec_with("a1", "x", 3, {}), rec_with("a1", "y", 3, {})};
    std::vector<QualityRating> ratings = {{"other", "clarity", "r1", 2}};
    // "other" never annotated -> no overlap
    EXPECT_THROW(external_correlations(records, ratings, {{QualityDimInfo{"clarity", "Clarity"}}}),
                 std::invalid_argument);
}

TEST(PairReasonCorrelations, DirectionAndUndefinedRows) {
    // pairs where "attacking-abusive" tags exactly the pairs whose b is
    // inappropriate: indicator correlates positively with the IN diff
    std::vector<AnnotationRecord> records;
    std::vector<PairReason> pairs;
    int pair_no = 0;
    for (int i = 0; i < 8; ++i) {
        const std::string good = "g" + std::to_string(i), bad = "b" + std::to_string(i);
        const bool tagged = i % 2 == 0;
        for (int a = 0; a < 3; ++a) {
            records.push_back(rec_with(good, "ann" + std::to_string(a), 3, {}));
            records.push_back(rec_with(bad, "ann" + std::to_string(a), (tagged || a == 0) ? 1 : 3,
                                       (tagged || a == 0) ? std::vector<Dim>{Dim::TE, Dim::ED}
                                                          : std::vector<Dim>{}));
        }
        pairs.push_back({"p" + std::to_string(pair_no++), good, bad,
                         tagged ? "attacking-abusive" : "weak-vague"});
    }
    const auto m = pair_reason_correlations(pairs, records);
    ASSERT_EQ(m.row_labels.size(), pair_reason_catalog().size());
    const auto& attacking = m.cells[0][static_cast<size_t>(Dim::IN)];
    ASSERT_TRUE(attacking.defined);
    EXPECT_GT(attacking.value, 0.5);
    // a reason occurring on zero pairs -> undefined row
    size_t overall_row = 0;
    for (size_t r = 0; r < m.row_labels.size(); ++r)
        if (m.row_labels[r] == "sticks-to-topic") overall_row = r;
    EXPECT_FALSE(m.cells[overall_row][static_cast<size_t>(Dim::IN)].defined);
}

TEST(VennOverlap, CellsAndRegionSums) {
    std::vector<QualityRating> ratings;
    // a1 low on both; a2 low on appropriateness only; a3 low on neither
    auto add = [&](const std::string& arg, const std::string& dim, int score) {
        ratings.push_back({arg, dim, "r1", score});
    };
    add("a1", "appropriateness", 1);
    add("a1", "credibility", 1);
    add("a2", "appropriateness", 1);
    add("a2", "credibility", 3);
    add("a3", "appropriateness", 2);
    add("a3", "credibility", 2);
    const auto report = venn_overlap(ratings, {"appropriateness", "credibility"}, 1.0);
    EXPECT_EQ(report.arguments, 3u);
    EXPECT_EQ(report.cells.at(0b11), 1u);
    EXPECT_EQ(report.cells.at(0b01), 1u);
    EXPECT_EQ(report.cells.at(0b00), 1u);
    EXPECT_EQ(report.low_on(0), 2u);             // appropriateness-low total
    EXPECT_EQ(report.overlap({0, 1}), 1u);       // both low

    // unknown dimension rejected
    EXPECT_THROW(venn_overlap(ratings, {"nope"}, 1.0), std::invalid_argument);

    // empty dimension set: one cell counting every rated argument
    const auto empty = venn_overlap(ratings, {}, 1.0);
    EXPECT_EQ(empty.cells.at(0), 3u);
}

TEST(VennOverlapProperty, CellsSumAndNonNegative) {
    Rng rng(91);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<QualityRating> ratings;
        const size_t n = 5 + rng.next_below(20);
        for (size_t i = 0; i < n; ++i)
            for (const char* dim : {"q1", "q2", "q3"})
                for (int rater = 0; rater < 3; ++rater)
                    ratings.push_back({"a" + std::to_string(i), dim, "r" + std::to_string(rater),
                                       1 + static_cast<int>(rng.next_below(3))});
        const auto report = venn_overlap(ratings, {"q1", "q2", "q3"}, 1.0);
        size_t total = 0, low_any = 0;
        for (const auto& [mask, count] : report.cells) {
            total += count;
            if (mask) low_any += count;
        }
        ASSERT_EQ(total, n);
        size_t union_ie = 0;  // inclusion-exclusion union must equal low_any
        for (size_t d = 0; d < 3; ++d) union_ie += report.low_on(d);
        union_ie -= report.overlap({0, 1}) + report.overlap({0, 2}) + report.overlap({1, 2});
        union_ie += report.overlap({0, 1, 2});
        ASSERT_EQ(union_ie, low_any);
    }
}
