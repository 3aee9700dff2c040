#pragma once
// Annotator-reliability model in the MACE family, fitted with EM.
//
// Generative story per item i and annotation a_ij: a latent true label
// T_i (uniform prior); annotator j flips a spam coin S_ij ~
// Bernoulli(theta_j). Not spamming -> copies T_i; spamming -> draws from
// the annotator's spam-label distribution xi_j. EM alternates posterior
// computation over (T_i, S_ij) with closed-form re-estimation of theta
// and xi from smoothed fractional counts. Each dimension is fitted
// independently on binary labels (IN binarized first).
//
// The tracked objective is the observed-data log-likelihood plus the
// Beta/Dirichlet log-prior terms matching the additive smoothing, which
// makes it provably non-decreasing across EM iterations; restarts are
// ranked by it.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "inapt/aggregate.hpp"
#include "inapt/rng.hpp"
#include "inapt/taxonomy.hpp"

namespace inapt {

struct MaceConfig {
    int iterations = 50;
    int restarts = 10;
    double smoothing = 0.1;  // added per label: delta = smoothing / num_labels
    uint64_t seed = 1;
    double init_noise = 0.5;  // perturbation amplitude for restarts >= 1
};

// One annotation: annotator index + label index.
struct MaceObs {
    int annotator;
    int label;
};

struct MaceFit {
    std::vector<double> theta;             // per annotator: spamming probability
    std::vector<std::vector<double>> xi;   // per annotator: label distribution when spamming
    std::vector<std::vector<double>> posterior;  // per item: distribution over labels
    double objective = -std::numeric_limits<double>::infinity();
    int best_restart = -1;
    std::vector<double> trajectory;  // objective after each E-step of the best restart
};

namespace detail {

struct EmScratch {
    std::vector<double> theta;
    std::vector<std::vector<double>> xi;
};

inline void em_init(EmScratch& p, int annotators, int labels, int restart, double noise, Rng& rng) {
    p.theta.assign(static_cast<size_t>(annotators), 0.5);
    p.xi.assign(static_cast<size_t>(annotators), std::vector<double>(static_cast<size_t>(labels), 1.0 / labels));
    if (restart == 0) return;  // restart 0: exact uniform start
    for (int j = 0; j < annotators; ++j) {
        p.theta[static_cast<size_t>(j)] = 0.5 + noise * (rng.next_double() - 0.5);
        double sum = 0.0;
        for (int l = 0; l < labels; ++l) {
            p.xi[static_cast<size_t>(j)][static_cast<size_t>(l)] = 1.0 + noise * rng.next_double();
            sum += p.xi[static_cast<size_t>(j)][static_cast<size_t>(l)];
        }
        for (int l = 0; l < labels; ++l) p.xi[static_cast<size_t>(j)][static_cast<size_t>(l)] /= sum;
    }
}

inline double log_prior(const EmScratch& p, double delta) {
    double lp = 0.0;
    for (size_t j = 0; j < p.theta.size(); ++j) {
        lp += delta * (std::log(p.theta[j]) + std::log(1.0 - p.theta[j]));
        for (double x : p.xi[j]) lp += delta * std::log(x);
    }
    return lp;
}

}  // namespace detail

// EM over one dimension. `items[i]` lists the annotations of item i.
inline MaceFit mace_em(const std::vector<std::vector<MaceObs>>& items, int annotators, int labels,
                       const MaceConfig& cfg) {
    if (annotators < 2) throw std::invalid_argument("mace_em: need >= 2 annotators");
    if (labels < 2) throw std::invalid_argument("mace_em: need >= 2 labels");
    for (size_t i = 0; i < items.size(); ++i)
        if (items[i].empty())
            throw std::invalid_argument("mace_em: item " + std::to_string(i) + " has no annotations");

    const double delta = cfg.smoothing / labels;
    const double prior_t = 1.0 / labels;
    Rng rng(cfg.seed);

    MaceFit best;
    for (int restart = 0; restart < cfg.restarts; ++restart) {
        Rng restart_rng = rng.fork(static_cast<uint64_t>(restart));
        detail::EmScratch p;
        detail::em_init(p, annotators, labels, restart, cfg.init_noise, restart_rng);

        std::vector<std::vector<double>> posterior(items.size(),
                                                   std::vector<double>(static_cast<size_t>(labels), 0.0));
        std::vector<double> trajectory;
        std::vector<double> spam(static_cast<size_t>(annotators));
        std::vector<double> count(static_cast<size_t>(annotators));
        std::vector<std::vector<double>> spam_label(static_cast<size_t>(annotators),
                                                    std::vector<double>(static_cast<size_t>(labels)));
        bool aborted = false;

        // One E-step pass: fills posteriors, returns data log-likelihood,
        // optionally accumulates expected spam counts for the M-step.
        auto e_step = [&](bool accumulate) -> double {
            if (accumulate) {
                std::fill(spam.begin(), spam.end(), 0.0);
                std::fill(count.begin(), count.end(), 0.0);
                for (auto& row : spam_label) std::fill(row.begin(), row.end(), 0.0);
            }
            double ll = 0.0;
            std::vector<double> w(static_cast<size_t>(labels));
            for (size_t i = 0; i < items.size(); ++i) {
                double z = 0.0;
                for (int t = 0; t < labels; ++t) {
                    double prod = prior_t;
                    for (const auto& obs : items[i]) {
                        const double copy = (obs.label == t) ? (1.0 - p.theta[static_cast<size_t>(obs.annotator)]) : 0.0;
                        prod *= copy + p.theta[static_cast<size_t>(obs.annotator)] *
                                           p.xi[static_cast<size_t>(obs.annotator)][static_cast<size_t>(obs.label)];
                    }
                    w[static_cast<size_t>(t)] = prod;
                    z += prod;
                }
                if (!(z > 0.0) || !std::isfinite(z)) return std::numeric_limits<double>::quiet_NaN();
                ll += std::log(z);
                for (int t = 0; t < labels; ++t)
                    posterior[i][static_cast<size_t>(t)] = w[static_cast<size_t>(t)] / z;
                if (!accumulate) continue;
                for (const auto& obs : items[i]) {
                    const size_t j = static_cast<size_t>(obs.annotator);
                    const double spam_part = p.theta[j] * p.xi[j][static_cast<size_t>(obs.label)];
                    double e_spam = 0.0;
                    for (int t = 0; t < labels; ++t) {
                        const double copy = (obs.label == t) ? (1.0 - p.theta[j]) : 0.0;
                        e_spam += posterior[i][static_cast<size_t>(t)] * (spam_part / (copy + spam_part));
                    }
                    spam[j] += e_spam;
                    spam_label[j][static_cast<size_t>(obs.label)] += e_spam;
                    count[j] += 1.0;
                }
            }
            return ll;
        };

        for (int it = 0; it < cfg.iterations; ++it) {
            const double ll = e_step(true);
            if (!std::isfinite(ll)) { aborted = true; break; }
            trajectory.push_back(ll + detail::log_prior(p, delta));
            for (int j = 0; j < annotators; ++j) {
                const size_t js = static_cast<size_t>(j);
                p.theta[js] = (spam[js] + delta) / (count[js] + 2.0 * delta);
                for (int l = 0; l < labels; ++l)
                    p.xi[js][static_cast<size_t>(l)] =
                        (spam_label[js][static_cast<size_t>(l)] + delta) / (spam[js] + labels * delta);
            }
        }
        if (aborted) continue;
        const double ll = e_step(false);
        if (!std::isfinite(ll)) continue;
        trajectory.push_back(ll + detail::log_prior(p, delta));

        const double objective = trajectory.back();
        if (objective > best.objective) {
            best.theta = p.theta;
            best.xi = p.xi;
            best.posterior = posterior;
            best.objective = objective;
            best.best_restart = restart;
            best.trajectory = trajectory;
        }
    }
    if (best.best_restart < 0) throw std::runtime_error("mace_em: every restart diverged");
    return best;
}

// Fitted model over all 14 dimensions. Labels are binary: index 0 = no,
// 1 = yes; `posterior[d][i][l]`.
struct MaceModel {
    MaceConfig config;
    std::vector<std::string> annotator_ids;
    std::vector<std::string> argument_ids;  // sorted
    std::array<MaceFit, kDimCount> dims;
    double log_likelihood = 0.0;  // sum of per-dimension objectives
};

inline MaceModel mace_fit(const std::vector<AnnotationRecord>& records, const MaceConfig& cfg = {}) {
    std::map<std::string, int> annotator_idx;
    for (const auto& r : records) annotator_idx.emplace(r.annotator_id, 0);
    if (annotator_idx.size() < 2) throw std::invalid_argument("mace_fit: need >= 2 annotators");
    {
        int next = 0;
        for (auto& [id, idx] : annotator_idx) idx = next++;
    }
    std::map<std::string, size_t> arg_idx;
    for (const auto& r : records) arg_idx.emplace(r.argument_id, 0);
    {
        size_t next = 0;
        for (auto& [id, idx] : arg_idx) idx = next++;
    }

    MaceModel model;
    model.config = cfg;
    model.annotator_ids.reserve(annotator_idx.size());
    for (const auto& [id, idx] : annotator_idx) model.annotator_ids.push_back(id);
    model.argument_ids.reserve(arg_idx.size());
    for (const auto& [id, idx] : arg_idx) model.argument_ids.push_back(id);

    const int annotators = static_cast<int>(annotator_idx.size());
    for (Dim d : kAllDims) {
        std::vector<std::vector<MaceObs>> items(arg_idx.size());
        for (const auto& r : records) {
            const bool yes = (d == Dim::IN) ? binarize_in(r.in_rating) : r.flag(d);
            items[arg_idx[r.argument_id]].push_back({annotator_idx[r.annotator_id], yes ? 1 : 0});
        }
        MaceConfig dim_cfg = cfg;
        dim_cfg.seed = Rng(cfg.seed).fork(static_cast<uint64_t>(d)).next_u64();
        model.dims[static_cast<size_t>(d)] = mace_em(items, annotators, 2, dim_cfg);
        model.log_likelihood += model.dims[static_cast<size_t>(d)].objective;
    }
    return model;
}

// Posterior-argmax labels; exact ties fall to `no`.
inline LabelMatrix mace_labels(const MaceModel& model) {
    LabelMatrix out;
    out.provenance = Provenance::mace;
    out.argument_ids = model.argument_ids;
    out.cells.assign(model.argument_ids.size(), {});
    for (Dim d : kAllDims) {
        const auto& fit = model.dims[static_cast<size_t>(d)];
        for (size_t i = 0; i < out.size(); ++i)
            out.cells[i][static_cast<size_t>(d)] = fit.posterior[i][1] > fit.posterior[i][0] ? 1 : 0;
    }
    return out;
}

}  // namespace inapt
