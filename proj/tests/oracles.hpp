#pragma once
// Independent oracles for the statistics kernels: every one of these
// computes its quantity by direct enumeration from first principles and
// must stay independent of the implementation route it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "inapt/mace.hpp"
#include "inapt/stats.hpp"

namespace oracle {

// Krippendorff's alpha by direct pair enumeration over pairable values.
inline double alpha(const std::vector<std::vector<double>>& units, inapt::AlphaMetric metric) {
    std::vector<std::vector<double>> pairable;
    for (const auto& u : units)
        if (u.size() >= 2) pairable.push_back(u);
    std::map<double, double> marginal;  // value -> count among pairable values
    double n = 0;
    for (const auto& u : pairable)
        for (double v : u) {
            marginal[v] += 1.0;
            n += 1.0;
        }
    auto d2 = [&](double a, double b) -> double {
        if (a == b) return 0.0;
        if (metric == inapt::AlphaMetric::nominal) return 1.0;
        const double lo = std::min(a, b), hi = std::max(a, b);
        double span = 0.0;
        for (const auto& [v, cnt] : marginal)
            if (v >= lo && v <= hi) span += cnt;
        span -= (marginal.at(lo) + marginal.at(hi)) / 2.0;
        return span * span;
    };
    double observed = 0.0;
    for (const auto& u : pairable) {
        double s = 0.0;
        for (size_t i = 0; i < u.size(); ++i)
            for (size_t j = 0; j < u.size(); ++j)
                if (i != j) s += d2(u[i], u[j]);
        observed += s / static_cast<double>(u.size() - 1);
    }
    observed /= n;
    std::vector<double> flat;
    for (const auto& u : pairable) flat.insert(flat.end(), u.begin(), u.end());
    double expected = 0.0;
    for (size_t i = 0; i < flat.size(); ++i)
        for (size_t j = 0; j < flat.size(); ++j)
            if (i != j) expected += d2(flat[i], flat[j]);
    expected /= n * (n - 1.0);
    if (expected == 0.0) return 1.0;
    return 1.0 - observed / expected;
}

// Kendall tau-b by direct O(n^2) pair counting.
inline inapt::Corr tau(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    long long concordant = 0, discordant = 0, tx_only = 0, ty_only = 0;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            const int dx = (x[i] > x[j]) - (x[i] < x[j]);
            const int dy = (y[i] > y[j]) - (y[i] < y[j]);
            if (dx == 0 && dy == 0) continue;
            if (dx == 0) tx_only++;
            else if (dy == 0) ty_only++;
            else if (dx == dy) concordant++;
            else discordant++;
        }
    const long long cd = concordant + discordant;
    if (cd + tx_only == 0 || cd + ty_only == 0) return {};
    return {static_cast<double>(concordant - discordant) /
                (std::sqrt(static_cast<double>(cd + tx_only)) * std::sqrt(static_cast<double>(cd + ty_only))),
            true};
}

// Two-sided exact Wilcoxon p by enumerating all 2^n sign assignments
// over the averaged ranks (n <= ~20).
inline double wilcoxon_exact_p(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> diff;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) diff.push_back(a[i] - b[i]);
    const size_t n = diff.size();
    std::vector<std::pair<double, size_t>> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = {std::fabs(diff[i]), i};
    std::sort(order.begin(), order.end());
    std::vector<double> rank(n);
    for (size_t i = 0; i < n;) {
        size_t j = i;
        while (j < n && order[j].first == order[i].first) ++j;
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (size_t k = i; k < j; ++k) rank[order[k].second] = avg;
        i = j;
    }
    double w_plus = 0.0;
    for (size_t i = 0; i < n; ++i)
        if (diff[i] > 0) w_plus += rank[i];
    double le = 0.0, ge = 0.0;
    const uint64_t combos = 1ull << n;
    for (uint64_t mask = 0; mask < combos; ++mask) {
        double w = 0.0;
        for (size_t i = 0; i < n; ++i)
            if (mask & (1ull << i)) w += rank[i];
        if (w <= w_plus + 1e-12) le += 1.0;
        if (w >= w_plus - 1e-12) ge += 1.0;
    }
    return std::min(1.0, 2.0 * std::min(le, ge) / static_cast<double>(combos));
}

// Exhaustive likelihood grid search over the MACE parameter space for
// binary labels: theta_j on a coarse grid, spam-label distribution
// xi_j = (1-q_j, q_j) with q_j on a coarse grid; uniform label prior.
// Returns the argmax-likelihood parameters and their posterior labels.
struct MaceGridResult {
    std::vector<double> theta;
    std::vector<double> q;  // spam-yes probability per annotator
    double log_likelihood = -1e300;
    std::vector<int> labels;
};

inline MaceGridResult mace_grid_search(const std::vector<std::vector<inapt::MaceObs>>& items,
                                       int annotators) {
    const std::vector<double> theta_grid = {0.05, 0.15, 0.25, 0.35, 0.45, 0.55, 0.65, 0.75, 0.85, 0.95};
    const std::vector<double> q_grid = {0.1, 0.3, 0.5, 0.7, 0.9};

    MaceGridResult best;
    std::vector<size_t> theta_idx(static_cast<size_t>(annotators), 0);
    std::vector<size_t> q_idx(static_cast<size_t>(annotators), 0);

    auto evaluate = [&]() {
        double ll = 0.0;
        std::vector<int> labels(items.size(), 0);
        for (size_t i = 0; i < items.size(); ++i) {
            double w[2];
            for (int t = 0; t < 2; ++t) {
                double prod = 0.5;
                for (const auto& obs : items[i]) {
                    const double th = theta_grid[theta_idx[static_cast<size_t>(obs.annotator)]];
                    const double q = q_grid[q_idx[static_cast<size_t>(obs.annotator)]];
                    const double spam = th * (obs.label == 1 ? q : 1.0 - q);
                    prod *= (obs.label == t ? 1.0 - th : 0.0) + spam;
                }
                w[t] = prod;
            }
            ll += std::log(w[0] + w[1]);
            labels[i] = w[1] > w[0] ? 1 : 0;
        }
        if (ll > best.log_likelihood) {
            best.log_likelihood = ll;
            best.labels = labels;
            best.theta.clear();
            best.q.clear();
            for (int j = 0; j < annotators; ++j) {
                best.theta.push_back(theta_grid[theta_idx[static_cast<size_t>(j)]]);
                best.q.push_back(q_grid[q_idx[static_cast<size_t>(j)]]);
            }
        }
    };

    // odometer over the full grid
    const size_t cells = theta_grid.size() * q_grid.size();
    std::vector<size_t> state(static_cast<size_t>(annotators), 0);
    while (true) {
        for (int j = 0; j < annotators; ++j) {
            theta_idx[static_cast<size_t>(j)] = state[static_cast<size_t>(j)] / q_grid.size();
            q_idx[static_cast<size_t>(j)] = state[static_cast<size_t>(j)] % q_grid.size();
        }
        evaluate();
        int pos = 0;
        while (pos < annotators) {
            if (++state[static_cast<size_t>(pos)] < cells) break;
            state[static_cast<size_t>(pos)] = 0;
            ++pos;
        }
        if (pos == annotators) break;
    }
    return best;
}

}  // namespace oracle
