#pragma once
// Numeric kernels: Kendall tau-b, Pearson r, Krippendorff's alpha,
// Wilcoxon signed-rank. Pure functions, no domain types; the table
// builders in analysis.hpp sit on top of these.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace inapt {

// Correlation value that can be undefined (all-tied input, zero variance).
// Reports render undefined cells as .00; callers can still tell them apart.
struct Corr {
    double value = 0.0;
    bool defined = false;
};

// Kendall's tau-b with tie correction: (C - D) / sqrt((C+D+Tx)(C+D+Ty)),
// Tx/Ty = pairs tied only in x / only in y. Computed from the joint
// frequency table of rank-compressed values: O(n log n + dx*dy), exact
// integer pair counts. (The test oracle enumerates all pairs directly.)
inline Corr kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("kendall_tau_b: length mismatch");
    const size_t n = x.size();
    if (n < 2) throw std::invalid_argument("kendall_tau_b: need >= 2 observations");

    auto compress = [](const std::vector<double>& v) {
        std::vector<double> sorted(v);
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        std::vector<size_t> idx(v.size());
        for (size_t i = 0; i < v.size(); ++i)
            idx[i] = static_cast<size_t>(std::lower_bound(sorted.begin(), sorted.end(), v[i]) - sorted.begin());
        return std::pair{idx, sorted.size()};
    };
    auto [ix, dx] = compress(x);
    auto [iy, dy] = compress(y);

    std::vector<int64_t> freq(dx * dy, 0);
    for (size_t i = 0; i < n; ++i) freq[ix[i] * dy + iy[i]]++;

    std::vector<int64_t> col_prev(dy, 0);  // counts from rows above the current one
    int64_t concordant = 0, discordant = 0, seen = 0;
    for (size_t r = 0; r < dx; ++r) {
        int64_t less = 0;  // sum of col_prev[0..c-1]
        for (size_t c = 0; c < dy; ++c) {
            const int64_t f = freq[r * dy + c];
            if (f) {
                const int64_t greater = seen - less - col_prev[c];
                concordant += f * less;
                discordant += f * greater;
            }
            less += col_prev[c];
        }
        for (size_t c = 0; c < dy; ++c) {
            const int64_t f = freq[r * dy + c];
            col_prev[c] += f;
            seen += f;
        }
    }

    auto choose2 = [](int64_t k) { return k * (k - 1) / 2; };
    int64_t ties_x = 0, ties_y = 0, ties_both = 0;
    for (size_t r = 0; r < dx; ++r) {
        int64_t row = 0;
        for (size_t c = 0; c < dy; ++c) {
            row += freq[r * dy + c];
            ties_both += choose2(freq[r * dy + c]);
        }
        ties_x += choose2(row);
    }
    for (size_t c = 0; c < dy; ++c) {
        int64_t col = 0;
        for (size_t r = 0; r < dx; ++r) col += freq[r * dy + c];
        ties_y += choose2(col);
    }
    const int64_t tx_only = ties_x - ties_both;
    const int64_t ty_only = ties_y - ties_both;
    const int64_t cd = concordant + discordant;
    if (cd + tx_only == 0 || cd + ty_only == 0) return {};
    const double denom =
        std::sqrt(static_cast<double>(cd + tx_only)) * std::sqrt(static_cast<double>(cd + ty_only));
    return {static_cast<double>(concordant - discordant) / denom, true};
}

inline Corr pearson_r(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("pearson_r: length mismatch");
    const size_t n = x.size();
    if (n < 2) throw std::invalid_argument("pearson_r: need >= 2 observations");
    double mx = 0, my = 0;
    for (size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0, sxx = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return {};
    return {sxy / std::sqrt(sxx * syy), true};
}

enum class AlphaMetric : uint8_t { nominal, ordinal };

struct AlphaResult {
    double alpha = 0.0;
    // Zero expected disagreement (all labels globally identical): alpha is
    // defined as 1.0 and flagged.
    bool degenerate = false;
};

// Krippendorff's alpha over a coincidence matrix: alpha = 1 - Do/De.
// `units` holds the labels present per item (annotator identity does not
// enter the statistic); items with fewer than two labels are excluded.
// Ordinal distances use the standard cumulative-marginal metric.
inline AlphaResult krippendorff_alpha(const std::vector<std::vector<double>>& units, AlphaMetric metric) {
    std::vector<const std::vector<double>*> pairable;
    for (const auto& u : units)
        if (u.size() >= 2) pairable.push_back(&u);
    if (pairable.empty())
        throw std::invalid_argument("krippendorff_alpha: no item has >= 2 labels");

    std::vector<double> cats;
    for (const auto* u : pairable) cats.insert(cats.end(), u->begin(), u->end());
    std::sort(cats.begin(), cats.end());
    cats.erase(std::unique(cats.begin(), cats.end()), cats.end());
    const size_t v = cats.size();
    auto cat_of = [&](double value) {
        return static_cast<size_t>(std::lower_bound(cats.begin(), cats.end(), value) - cats.begin());
    };

    std::vector<double> coin(v * v, 0.0);
    for (const auto* u : pairable) {
        const double w = 1.0 / static_cast<double>(u->size() - 1);
        for (size_t i = 0; i < u->size(); ++i)
            for (size_t j = 0; j < u->size(); ++j)
                if (i != j) coin[cat_of((*u)[i]) * v + cat_of((*u)[j])] += w;
    }
    std::vector<double> marg(v, 0.0);
    double total = 0.0;
    for (size_t c = 0; c < v; ++c) {
        for (size_t k = 0; k < v; ++k) marg[c] += coin[c * v + k];
        total += marg[c];
    }

    std::vector<double> cum(v, 0.0);
    double run = 0.0;
    for (size_t c = 0; c < v; ++c) { run += marg[c]; cum[c] = run; }
    auto dist2 = [&](size_t c, size_t k) -> double {
        if (c == k) return 0.0;
        if (metric == AlphaMetric::nominal) return 1.0;
        const size_t lo = std::min(c, k), hi = std::max(c, k);
        const double span = cum[hi] - (lo ? cum[lo - 1] : 0.0) - (marg[lo] + marg[hi]) / 2.0;
        return span * span;
    };

    double observed = 0.0, expected = 0.0;
    for (size_t c = 0; c < v; ++c)
        for (size_t k = 0; k < v; ++k) {
            if (c == k) continue;
            const double d2 = dist2(c, k);
            observed += coin[c * v + k] * d2;
            expected += marg[c] * marg[k] * d2;
        }
    observed /= total;
    expected /= total * (total - 1.0);
    if (expected == 0.0) return {1.0, true};
    return {1.0 - observed / expected, false};
}

// Share of items (in percent) whose labels are all identical.
inline double full_agreement_pct(const std::vector<std::vector<double>>& units) {
    if (units.empty()) throw std::invalid_argument("full_agreement_pct: empty input");
    size_t agree = 0;
    for (const auto& u : units) {
        bool same = true;
        for (size_t i = 1; i < u.size(); ++i) same &= (u[i] == u[0]);
        agree += same ? 1 : 0;
    }
    return 100.0 * static_cast<double>(agree) / static_cast<double>(units.size());
}

struct WilcoxonResult {
    bool tested = false;  // false: all differences were zero (no-test verdict)
    int n = 0;            // pairs with nonzero difference
    double statistic = 0.0;  // signed rank sum W+ - W-
    double w_plus = 0.0;
    double w_minus = 0.0;
    double p_value = 1.0;  // two-sided
    bool exact = false;
    bool significant = false;
};

// Paired two-sided Wilcoxon signed-rank test. Zero differences dropped,
// tied |d| ranks averaged. n <= exact_cutoff uses the exact permutation
// distribution (rank-sum DP over doubled ranks, identical to enumerating
// all 2^n sign vectors); larger n uses the normal approximation with tie
// and continuity correction.
inline WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b,
                                           double alpha_level = 0.05, int exact_cutoff = 25) {
    if (a.size() != b.size()) throw std::invalid_argument("wilcoxon: length mismatch");
    if (a.empty()) throw std::invalid_argument("wilcoxon: empty samples");
    std::vector<double> diff;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) diff.push_back(a[i] - b[i]);
    WilcoxonResult res;
    if (diff.empty()) return res;
    res.tested = true;
    const int n = static_cast<int>(diff.size());
    res.n = n;

    std::vector<std::pair<double, int>> order(n);
    for (int i = 0; i < n; ++i) order[i] = {std::fabs(diff[i]), i};
    std::sort(order.begin(), order.end());
    std::vector<double> rank(n, 0.0);
    std::vector<int> tie_sizes;
    for (int i = 0; i < n;) {
        int j = i;
        while (j < n && order[j].first == order[i].first) ++j;
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (int k = i; k < j; ++k) rank[order[k].second] = avg;
        tie_sizes.push_back(j - i);
        i = j;
    }
    for (int i = 0; i < n; ++i) {
        if (diff[i] > 0) res.w_plus += rank[i];
        else res.w_minus += rank[i];
    }
    res.statistic = res.w_plus - res.w_minus;

    if (n <= exact_cutoff) {
        res.exact = true;
        // distribution of 2*W+ over all sign assignments; doubled average
        // ranks are integers
        std::vector<int> r2(n);
        int total2 = 0;
        for (int i = 0; i < n; ++i) {
            r2[i] = static_cast<int>(std::llround(2.0 * rank[i]));
            total2 += r2[i];
        }
        std::vector<double> ways(static_cast<size_t>(total2) + 1, 0.0);
        ways[0] = 1.0;
        for (int i = 0; i < n; ++i)
            for (int s = total2; s >= r2[i]; --s) ways[s] += ways[s - r2[i]];
        const int w2 = static_cast<int>(std::llround(2.0 * res.w_plus));
        double le = 0.0, ge = 0.0, all = 0.0;
        for (int s = 0; s <= total2; ++s) {
            all += ways[s];
            if (s <= w2) le += ways[s];
            if (s >= w2) ge += ways[s];
        }
        res.p_value = std::min(1.0, 2.0 * std::min(le, ge) / all);
    } else {
        const double nd = static_cast<double>(n);
        const double mean = nd * (nd + 1.0) / 4.0;
        double tie_corr = 0.0;
        for (int t : tie_sizes) tie_corr += static_cast<double>(t) * t * t - t;
        const double var = nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0 - tie_corr / 48.0;
        double num = res.w_plus - mean;
        if (num > 0.5) num -= 0.5;
        else if (num < -0.5) num += 0.5;
        else num = 0.0;
        const double z = num / std::sqrt(var);
        res.p_value = std::erfc(std::fabs(z) / std::sqrt(2.0));
    }
    res.significant = res.p_value < alpha_level;
    return res;
}

}  // namespace inapt
