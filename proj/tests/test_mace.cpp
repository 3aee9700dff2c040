#include "inapt/mace.hpp"

#include <gtest/gtest.h>

#include "inapt/rng.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace inapt;

namespace {

// items[i] = binary labels of annotators 0..j-1; -1 = missing
std::vector<std::vector<MaceObs>> make_items(const std::vector<std::vector<int>>& labels) {
    std::vector<std::vector<MaceObs>> items;
    for (const auto& row : labels) {
        std::vector<MaceObs> obs;
        for (size_t j = 0; j < row.size(); ++j)
            if (row[j] >= 0) obs.push_back({static_cast<int>(j), row[j]});
        items.push_back(obs);
    }
    return items;
}

std::vector<AnnotationRecord> unanimous_records(size_t n, uint64_t seed) {
    Rng rng(seed);
    std::vector<AnnotationRecord> out;
    for (size_t i = 0; i < n; ++i) {
        AnnotationRecord base;
        base.argument_id = "arg" + std::to_string(i);
        base.in_rating = rng.next_bool() ? 2 : 3;
        for (Dim d : kAllDims)
            if (d != Dim::IN) base.set_flag(d, base.in_rating != 3 && rng.next_bool());
        for (int a = 0; a < 3; ++a) {
            AnnotationRecord rec = base;
            rec.annotator_id = "ann" + std::to_string(a + 1);
            out.push_back(rec);
        }
    }
    return out;
}

}  // namespace

TEST(MaceEm, RejectsDegenerateInput) {
    EXPECT_THROW(mace_em(make_items({{1}, {0}}), 1, 2, MaceConfig{}), std::invalid_argument);
    EXPECT_THROW(mace_em(make_items({{1, 1}, {}}), 2, 2, MaceConfig{}), std::invalid_argument);
}

// Frozen one-E-step oracle: 2 items x 3 annotators, labels
// item0 = (yes, yes, no), item1 = (no, no, no); uniform start.
TEST(MaceEm, HandComputedEStep) {
    const auto items = make_items({{1, 1, 0}, {0, 0, 0}});
    MaceConfig cfg;
    cfg.iterations = 0;  // no M-step: posteriors at the uniform init
    cfg.restarts = 1;
    cfg.seed = 1;
    const MaceFit fit = mace_em(items, 3, 2, cfg);
    ASSERT_EQ(fit.posterior.size(), 2u);
    EXPECT_NEAR(fit.posterior[0][0], 0.25, 1e-12);
    EXPECT_NEAR(fit.posterior[0][1], 0.75, 1e-12);
    EXPECT_NEAR(fit.posterior[1][0], 27.0 / 28.0, 1e-12);
    EXPECT_NEAR(fit.posterior[1][1], 1.0 / 28.0, 1e-12);

    // one full EM iteration: M-step parameters, hand-computed
    cfg.iterations = 1;
    const MaceFit one = mace_em(items, 3, 2, cfg);
    EXPECT_NEAR(one.theta[0], 0.43197278911564624, 1e-12);
    EXPECT_NEAR(one.theta[1], 0.43197278911564624, 1e-12);
    EXPECT_NEAR(one.theta[2], 0.590702947845805, 1e-12);
    EXPECT_NEAR(one.xi[0][0], 0.42537313432835816, 1e-12);
    EXPECT_NEAR(one.xi[0][1], 0.5746268656716419, 1e-12);
    EXPECT_NEAR(one.xi[2][0], 0.9612546125461254, 1e-12);
    EXPECT_NEAR(one.xi[2][1], 0.03874538745387454, 1e-12);
    ASSERT_EQ(one.trajectory.size(), 2u);
    // data log-likelihood at the uniform start plus its smoothing prior
    const double delta = 0.05;
    const double prior = 3 * delta * (std::log(0.5) + std::log(0.5)) + 6 * delta * std::log(0.5);
    EXPECT_NEAR(one.trajectory[0], -3.8869493678760305 + prior, 1e-10);
}

TEST(MaceEm, UnanimousAnnotatorsReproduced) {
    Rng rng(55);
    for (uint64_t seed : {1ull, 7ull, 2024ull}) {
        std::vector<std::vector<int>> labels;
        for (int i = 0; i < 15; ++i) {
            const int v = rng.next_bool() ? 1 : 0;
            labels.push_back({v, v, v});
        }
        MaceConfig cfg;
        cfg.seed = seed;
        const MaceFit fit = mace_em(make_items(labels), 3, 2, cfg);
        for (size_t i = 0; i < labels.size(); ++i) {
            const int want = labels[i][0];
            EXPECT_GT(fit.posterior[i][static_cast<size_t>(want)], fit.posterior[i][static_cast<size_t>(1 - want)]);
        }
    }
}

// Two reliable annotators + one coin-flipper: the EM fixed point must
// match the brute-force likelihood grid search (oracle built first), the
// spammer gets the higher theta, labels follow the agreeing pair.
TEST(MaceEm, TwoReliablePlusSpammerMatchesGridOracle) {
    Rng rng(606);
    std::vector<std::vector<int>> labels;
    std::vector<int> truth;
    for (int i = 0; i < 12; ++i) {
        const int t = (i % 2 == 0) ? 1 : 0;
        truth.push_back(t);
        labels.push_back({t, t, rng.next_bool() ? 1 : 0});
    }
    const auto items = make_items(labels);

    const auto grid = oracle::mace_grid_search(items, 3);
    for (int i = 0; i < 12; ++i) EXPECT_EQ(grid.labels[static_cast<size_t>(i)], truth[static_cast<size_t>(i)]);
    EXPECT_GT(grid.theta[2], grid.theta[0]);
    EXPECT_GT(grid.theta[2], grid.theta[1]);

    MaceConfig cfg;
    cfg.seed = 3;
    const MaceFit fit = mace_em(items, 3, 2, cfg);
    EXPECT_GT(fit.theta[2], fit.theta[0]);
    EXPECT_GT(fit.theta[2], fit.theta[1]);
    for (int i = 0; i < 12; ++i) {
        const int got = fit.posterior[static_cast<size_t>(i)][1] > fit.posterior[static_cast<size_t>(i)][0] ? 1 : 0;
        EXPECT_EQ(got, truth[static_cast<size_t>(i)]);
    }
}

// The tracked objective (likelihood + smoothing prior) never decreases
// within a restart.
TEST(MaceEmProperty, ObjectiveMonotone) {
    Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const size_t items_n = 4 + rng.next_below(16);
        const size_t annotators = 2 + rng.next_below(4);
        std::vector<std::vector<int>> labels(items_n, std::vector<int>(annotators, 0));
        for (auto& row : labels)
            for (auto& v : row) v = rng.next_bool() ? 1 : 0;
        MaceConfig cfg;
        cfg.iterations = 25;
        cfg.restarts = 3;
        cfg.seed = rng.next_u64();
        const MaceFit fit = mace_em(make_items(labels), static_cast<int>(annotators), 2, cfg);
        ASSERT_EQ(fit.trajectory.size(), 26u);
        for (size_t i = 1; i < fit.trajectory.size(); ++i)
            ASSERT_GE(fit.trajectory[i], fit.trajectory[i - 1] - 1e-9)
                << "iteration " << i << " at trial " << trial;
    }
}

TEST(MaceEmProperty, PosteriorRowsSumToOne) {
    Rng rng(88);
    std::vector<std::vector<int>> labels(30, std::vector<int>(3, 0));
    for (auto& row : labels)
        for (auto& v : row) v = rng.next_bool() ? 1 : 0;
    MaceConfig cfg;
    cfg.seed = 5;
    const MaceFit fit = mace_em(make_items(labels), 3, 2, cfg);
    for (const auto& row : fit.posterior) ASSERT_NEAR(row[0] + row[1], 1.0, 1e-9);
    for (const auto& xi : fit.xi) {
        double sum = 0.0;
        for (double v : xi) {
            ASSERT_GE(v, 0.0);
            ASSERT_LE(v, 1.0);
            sum += v;
        }
        ASSERT_NEAR(sum, 1.0, 1e-9);
    }
    for (double th : fit.theta) {
        ASSERT_GE(th, 0.0);
        ASSERT_LE(th, 1.0);
    }
}

TEST(MaceFit, FixedSeedBitReproducible) {
    const auto records = testutil::synthetic_records(40, 3, 11);
    MaceConfig cfg;
    cfg.iterations = 20;
    cfg.restarts = 4;
    cfg.seed = 99;
    const MaceModel a = mace_fit(records, cfg);
    const MaceModel b = mace_fit(records, cfg);
    EXPECT_EQ(a.log_likelihood, b.log_likelihood);
    for (Dim d : kAllDims) {
        const auto& fa = a.dims[static_cast<size_t>(d)];
        const auto& fb = b.dims[static_cast<size_t>(d)];
        ASSERT_EQ(fa.theta, fb.theta);
        ASSERT_EQ(fa.xi, fb.xi);
        ASSERT_EQ(fa.posterior, fb.posterior);
        ASSERT_EQ(fa.best_restart, fb.best_restart);
    }
    EXPECT_EQ(mace_labels(a).cells, mace_labels(b).cells);
}

TEST(MaceFit, SingleAnnotatorRejected) {
    std::vector<AnnotationRecord> records;
    AnnotationRecord rec;
    rec.argument_id = "a";
    rec.annotator_id = "only";
    rec.in_rating = 3;
    for (Dim d : kAllDims)
        if (d != Dim::IN) rec.set_flag(d, false);
    records.push_back(rec);
    EXPECT_THROW(mace_fit(records), std::invalid_argument);
}

TEST(MaceLabels, TieFallsToNo) {
    MaceModel model;
    model.argument_ids = {"a1"};
    for (Dim d : kAllDims) {
        auto& fit = model.dims[static_cast<size_t>(d)];
        fit.posterior = {{0.5, 0.5}};
    }
    const LabelMatrix labels = mace_labels(model);
    for (Dim d : kAllDims) EXPECT_FALSE(labels.label(0, d));
}

TEST(MaceLabels, ArgmaxRule) {
    MaceModel model;
    model.argument_ids = {"a1", "a2"};
    for (Dim d : kAllDims) {
        auto& fit = model.dims[static_cast<size_t>(d)];
        fit.posterior = {{0.1, 0.9}, {0.9, 0.1}};
    }
    const LabelMatrix labels = mace_labels(model);
    for (Dim d : kAllDims) {
        EXPECT_TRUE(labels.label(0, d));
        EXPECT_FALSE(labels.label(1, d));
    }
}
