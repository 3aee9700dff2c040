#include "inapt/stats.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "inapt/rng.hpp"
#include "oracles.hpp"

using namespace inapt;

namespace {

std::vector<double> random_tied_sequence(Rng& rng, size_t n, int distinct) {
    std::vector<double> v(n);
    for (auto& x : v) x = static_cast<double>(rng.next_below(static_cast<uint64_t>(distinct)));
    return v;
}

}  // namespace

// --- Kendall tau-b ---

TEST(KendallTau, PerfectAndReversed) {
    const std::vector<double> x = {1, 2, 3, 4};
    EXPECT_NEAR(kendall_tau_b(x, x).value, 1.0, 1e-12);
    const std::vector<double> rev = {4, 3, 2, 1};
    EXPECT_NEAR(kendall_tau_b(x, rev).value, -1.0, 1e-12);
}

TEST(KendallTau, FrozenTiedExample) {
    // pair-enumeration oracle value, frozen
    const std::vector<double> x = {1, 2, 2, 3, 3};
    const std::vector<double> y = {1, 1, 2, 2, 3};
    const Corr t = kendall_tau_b(x, y);
    ASSERT_TRUE(t.defined);
    EXPECT_NEAR(t.value, 0.75, 1e-12);
    const Corr o = oracle::tau(x, y);
    EXPECT_NEAR(t.value, o.value, 1e-12);
}

TEST(KendallTau, AllTiedUndefined) {
    const std::vector<double> c = {2, 2, 2, 2};
    const std::vector<double> y = {1, 2, 3, 4};
    EXPECT_FALSE(kendall_tau_b(c, y).defined);
    EXPECT_FALSE(kendall_tau_b(y, c).defined);
}

TEST(KendallTauProperty, MatchesPairEnumerationOracle) {
    Rng rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
        const size_t n = 2 + rng.next_below(40);
        const int distinct = 1 + static_cast<int>(rng.next_below(6));
        const auto x = random_tied_sequence(rng, n, distinct);
        const auto y = random_tied_sequence(rng, n, distinct);
        const Corr got = kendall_tau_b(x, y);
        const Corr want = oracle::tau(x, y);
        ASSERT_EQ(got.defined, want.defined);
        if (got.defined) ASSERT_NEAR(got.value, want.value, 1e-12);
    }
}

TEST(KendallTauProperty, PermutationInvariant) {
    Rng rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        const size_t n = 3 + rng.next_below(30);
        auto x = random_tied_sequence(rng, n, 4);
        auto y = random_tied_sequence(rng, n, 4);
        const Corr before = kendall_tau_b(x, y);
        std::vector<size_t> perm(n);
        for (size_t i = 0; i < n; ++i) perm[i] = i;
        rng.shuffle(perm);
        std::vector<double> px(n), py(n);
        for (size_t i = 0; i < n; ++i) {
            px[i] = x[perm[i]];
            py[i] = y[perm[i]];
        }
        const Corr after = kendall_tau_b(px, py);
        ASSERT_EQ(before.defined, after.defined);
        if (before.defined) ASSERT_NEAR(before.value, after.value, 1e-12);
    }
}

// On tie-free data, reversing the order of y's values negates tau.
TEST(KendallTauProperty, AntisymmetricOnTieFreeData) {
    Rng rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const size_t n = 2 + rng.next_below(20);
        std::vector<double> x(n), y(n);
        for (size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i) + rng.next_double() * 0.5;
        for (size_t i = 0; i < n; ++i) y[i] = static_cast<double>(i) + rng.next_double() * 0.5;
        rng.shuffle(y);
        std::vector<double> neg(n);
        for (size_t i = 0; i < n; ++i) neg[i] = -y[i];
        const Corr t = kendall_tau_b(x, y);
        const Corr tn = kendall_tau_b(x, neg);
        ASSERT_TRUE(t.defined && tn.defined);
        ASSERT_NEAR(t.value, -tn.value, 1e-12);
    }
}

// --- Pearson ---

TEST(Pearson, Basics) {
    const std::vector<double> x = {1, 2, 3, 5, 8};
    EXPECT_NEAR(pearson_r(x, x).value, 1.0, 1e-12);
    std::vector<double> neg(x.size());
    for (size_t i = 0; i < x.size(); ++i) neg[i] = -x[i];
    EXPECT_NEAR(pearson_r(x, neg).value, -1.0, 1e-12);
    const std::vector<double> c = {4, 4, 4, 4, 4};
    EXPECT_FALSE(pearson_r(x, c).defined);
}

TEST(Pearson, KnownValue) {
    // hand-checked small instance: r = cov/sd product
    const std::vector<double> x = {1, 2, 3, 4};
    const std::vector<double> y = {2, 1, 4, 3};
    // means 2.5/2.5; cov*n = (1.5*0.5)+(0.5*1.5)+(0.5*1.5)+(1.5*0.5)=3 -> wait:
    // (-1.5)(-0.5)+(-0.5)(-1.5)+(0.5)(1.5)+(1.5)(0.5) = 0.75+0.75+0.75+0.75 = 3
    // sxx = syy = 5 -> r = 3/5
    EXPECT_NEAR(pearson_r(x, y).value, 0.6, 1e-12);
}

// --- Krippendorff's alpha ---

TEST(Alpha, PerfectAgreementDegenerate) {
    const std::vector<std::vector<double>> units = {{1, 1, 1}, {1, 1, 1}};
    const auto res = krippendorff_alpha(units, AlphaMetric::nominal);
    EXPECT_EQ(res.alpha, 1.0);
    EXPECT_TRUE(res.degenerate);  // zero expected disagreement
}

TEST(Alpha, PerfectAgreementTwoCategories) {
    const std::vector<std::vector<double>> units = {{1, 1}, {0, 0}, {1, 1}, {0, 0}};
    const auto res = krippendorff_alpha(units, AlphaMetric::nominal);
    EXPECT_NEAR(res.alpha, 1.0, 1e-12);
    EXPECT_FALSE(res.degenerate);
}

TEST(Alpha, FrozenNominalToy) {
    // 4 items x 2 annotators; oracle value frozen: 0.125
    const std::vector<std::vector<double>> units = {{0, 0}, {0, 1}, {1, 1}, {1, 0}};
    const auto res = krippendorff_alpha(units, AlphaMetric::nominal);
    EXPECT_NEAR(res.alpha, 0.125, 1e-12);
    EXPECT_NEAR(oracle::alpha(units, AlphaMetric::nominal), 0.125, 1e-12);
}

TEST(Alpha, FrozenMissingDataToy) {
    // mixed unit sizes; frozen from the enumeration oracle
    const std::vector<std::vector<double>> units = {{1, 1, 2}, {2, 2, 2}, {1, 2}, {3, 3, 3}, {1, 3, 3}};
    EXPECT_NEAR(krippendorff_alpha(units, AlphaMetric::nominal).alpha, 0.4, 1e-12);
    EXPECT_NEAR(krippendorff_alpha(units, AlphaMetric::ordinal).alpha, 0.4004409171075838, 1e-12);
}

TEST(Alpha, SingleLabelUnitsExcluded) {
    const std::vector<std::vector<double>> with_singletons = {{1, 1}, {2}, {0, 1}, {2}};
    const std::vector<std::vector<double>> without = {{1, 1}, {0, 1}};
    EXPECT_NEAR(krippendorff_alpha(with_singletons, AlphaMetric::nominal).alpha,
                krippendorff_alpha(without, AlphaMetric::nominal).alpha, 1e-12);
    EXPECT_THROW(krippendorff_alpha({{1}, {2}}, AlphaMetric::nominal), std::invalid_argument);
}

TEST(AlphaProperty, MatchesBruteForceOracle) {
    Rng rng(21);
    for (int trial = 0; trial < 1000; ++trial) {
        const size_t items = 2 + rng.next_below(7);   // <= 8
        const size_t annotators = 2 + rng.next_below(3);  // <= 4
        const int categories = 2 + static_cast<int>(rng.next_below(3));
        std::vector<std::vector<double>> units;
        for (size_t i = 0; i < items; ++i) {
            std::vector<double> u;
            for (size_t a = 0; a < annotators; ++a)
                if (rng.next_double() < 0.85) u.push_back(static_cast<double>(rng.next_below(static_cast<uint64_t>(categories))));
            units.push_back(u);
        }
        size_t pairable = 0;
        for (const auto& u : units) pairable += u.size() >= 2;
        if (!pairable) continue;
        for (AlphaMetric metric : {AlphaMetric::nominal, AlphaMetric::ordinal}) {
            const auto got = krippendorff_alpha(units, metric);
            const double want = oracle::alpha(units, metric);
            ASSERT_NEAR(got.alpha, want, 1e-9);
        }
    }
}

TEST(AlphaProperty, ItemOrderInvariant) {
    Rng rng(22);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::vector<double>> units;
        const size_t items = 3 + rng.next_below(6);
        for (size_t i = 0; i < items; ++i)
            units.push_back({static_cast<double>(rng.next_below(3)), static_cast<double>(rng.next_below(3)),
                             static_cast<double>(rng.next_below(3))});
        auto shuffled = units;
        rng.shuffle(shuffled);
        for (auto& u : shuffled) rng.shuffle(u);  // annotator order inside a unit
        const auto a = krippendorff_alpha(units, AlphaMetric::ordinal);
        const auto b = krippendorff_alpha(shuffled, AlphaMetric::ordinal);
        ASSERT_NEAR(a.alpha, b.alpha, 1e-12);
    }
}

// --- full agreement ---

TEST(FullAgreement, Basics) {
    EXPECT_NEAR(full_agreement_pct({{1, 1, 1}, {2, 2, 2}}), 100.0, 1e-12);
    EXPECT_NEAR(full_agreement_pct({{1, 1, 2}, {2, 2, 2}}), 50.0, 1e-12);
    EXPECT_THROW(full_agreement_pct({}), std::invalid_argument);
}

// --- Wilcoxon signed-rank ---

TEST(Wilcoxon, AllZeroDifferencesNoTest) {
    const std::vector<double> a = {1, 2, 3};
    const auto res = wilcoxon_signed_rank(a, a);
    EXPECT_FALSE(res.tested);
    EXPECT_FALSE(res.significant);
}

TEST(Wilcoxon, FrozenSixPairExact) {
    // integer diffs so rank ties are exact; enumeration oracle values frozen
    const std::vector<double> a = {3, 5, 1, 7, 4, 2};
    const std::vector<double> b = {1, 2, 3, 3, 2, 5};
    const auto res = wilcoxon_signed_rank(a, b);
    ASSERT_TRUE(res.tested);
    EXPECT_TRUE(res.exact);
    EXPECT_NEAR(res.w_plus, 14.5, 1e-12);
    EXPECT_NEAR(res.w_minus, 6.5, 1e-12);
    EXPECT_NEAR(res.statistic, 8.0, 1e-12);
    EXPECT_NEAR(res.p_value, 0.53125, 1e-12);
    EXPECT_FALSE(res.significant);
    EXPECT_NEAR(oracle::wilcoxon_exact_p(a, b), 0.53125, 1e-12);
}

TEST(Wilcoxon, FrozenZeroDiffDropped) {
    const std::vector<double> a = {2, 2, 4, 9, 1};
    const std::vector<double> b = {2, 5, 1, 4, 3};
    const auto res = wilcoxon_signed_rank(a, b);
    EXPECT_EQ(res.n, 4);
    EXPECT_NEAR(res.statistic, 3.0, 1e-12);
    EXPECT_NEAR(res.p_value, 0.75, 1e-12);
}

TEST(Wilcoxon, AllPositive25PairsExtremeP) {
    std::vector<double> a(25), b(25, 0.0);
    for (size_t i = 0; i < a.size(); ++i) a[i] = static_cast<double>(i + 1);
    const auto res = wilcoxon_signed_rank(a, b);
    ASSERT_TRUE(res.exact);
    EXPECT_NEAR(res.p_value, 2.0 / 33554432.0, 1e-18);  // 2 / 2^25
    EXPECT_TRUE(res.significant);
}

TEST(Wilcoxon, Antisymmetric) {
    Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const size_t n = 2 + rng.next_below(12);
        std::vector<double> a(n), b(n);
        for (size_t i = 0; i < n; ++i) {
            a[i] = static_cast<double>(rng.next_below(8));
            b[i] = static_cast<double>(rng.next_below(8));
        }
        const auto ab = wilcoxon_signed_rank(a, b);
        const auto ba = wilcoxon_signed_rank(b, a);
        ASSERT_EQ(ab.tested, ba.tested);
        if (!ab.tested) continue;
        ASSERT_NEAR(ab.statistic, -ba.statistic, 1e-12);
        ASSERT_NEAR(ab.p_value, ba.p_value, 1e-12);
    }
}

TEST(WilcoxonProperty, ExactBranchMatchesEnumeration) {
    Rng rng(32);
    int tested = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const size_t n = 1 + rng.next_below(10);  // n <= 10
        std::vector<double> a(n), b(n);
        for (size_t i = 0; i < n; ++i) {
            a[i] = static_cast<double>(rng.next_below(6));
            b[i] = static_cast<double>(rng.next_below(6));
        }
        const auto res = wilcoxon_signed_rank(a, b);
        if (!res.tested) continue;
        ++tested;
        ASSERT_TRUE(res.exact);
        ASSERT_NEAR(res.p_value, oracle::wilcoxon_exact_p(a, b), 1e-12);
    }
    EXPECT_GT(tested, 300);
}

TEST(Wilcoxon, NormalApproximationSanity) {
    // n = 40 forces the approximation; compare against the exact DP run
    // with a raised cutoff (the DP is exact at any n).
    Rng rng(33);
    std::vector<double> a(40), b(40);
    for (size_t i = 0; i < a.size(); ++i) {
        a[i] = rng.next_double() + 0.15;
        b[i] = rng.next_double();
    }
    const auto approx = wilcoxon_signed_rank(a, b, 0.05, 25);
    const auto exact = wilcoxon_signed_rank(a, b, 0.05, 64);
    EXPECT_FALSE(approx.exact);
    EXPECT_TRUE(exact.exact);
    EXPECT_NEAR(approx.p_value, exact.p_value, 0.01);
}
