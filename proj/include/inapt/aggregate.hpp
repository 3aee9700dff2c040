#pragma once
// Combining per-annotator records into gold labels.
//
// Three rule-based strategies over yes-vote counts v of n annotators
// (IN binarized per annotator first):
//   conservative  yes iff v >= 1          (the corpus's final gold rule)
//   majority      yes iff v >= ceil((n+1)/2)
//   liberal       yes iff v == n
// so yes-set(liberal) <= yes-set(majority) <= yes-set(conservative).
// Every output row is closed under the hierarchy after thresholding.

#include <algorithm>
#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "inapt/taxonomy.hpp"
#include "inapt/tsv.hpp"

namespace inapt {

// 1/2 -> inappropriate (yes), 3 -> no.
inline bool binarize_in(int rating) {
    if (rating < 1 || rating > 3)
        throw std::invalid_argument("binarize_in: rating out of range: " + std::to_string(rating));
    return rating <= 2;
}

enum class Strategy : uint8_t { liberal, majority, conservative };

inline std::string_view strategy_name(Strategy s) {
    switch (s) {
        case Strategy::liberal: return "liberal";
        case Strategy::majority: return "majority";
        case Strategy::conservative: return "conservative";
    }
    return "?";
}

enum class Provenance : uint8_t { liberal, majority, conservative, mace };

inline std::string_view provenance_name(Provenance p) {
    switch (p) {
        case Provenance::liberal: return "liberal";
        case Provenance::majority: return "majority";
        case Provenance::conservative: return "conservative";
        case Provenance::mace: return "mace";
    }
    return "?";
}

inline Provenance provenance_of(Strategy s) {
    switch (s) {
        case Strategy::liberal: return Provenance::liberal;
        case Strategy::majority: return Provenance::majority;
        case Strategy::conservative: return Provenance::conservative;
    }
    return Provenance::conservative;
}

// Aggregated gold labels: one row per argument, one binary cell per
// dimension (IN holds the binarized value). Rows are kept sorted by
// argument id so exports are byte-stable regardless of input order.
struct LabelMatrix {
    std::vector<std::string> argument_ids;
    std::vector<std::array<uint8_t, kDimCount>> cells;
    Provenance provenance = Provenance::conservative;

    size_t size() const { return argument_ids.size(); }

    const std::array<uint8_t, kDimCount>& row(size_t i) const { return cells[i]; }

    bool label(size_t row_idx, Dim d) const { return cells[row_idx][static_cast<size_t>(d)] != 0; }

    size_t yes_count(Dim d) const {
        size_t c = 0;
        for (const auto& r : cells) c += r[static_cast<size_t>(d)];
        return c;
    }

    // -1 when the argument is absent.
    long long row_of(const std::string& argument_id) const {
        auto it = std::lower_bound(argument_ids.begin(), argument_ids.end(), argument_id);
        if (it == argument_ids.end() || *it != argument_id) return -1;
        return it - argument_ids.begin();
    }
};

inline void close_row(std::array<uint8_t, kDimCount>& row) {
    for (Dim d : kAllDims)
        if (level(d) == Level::sub && row[static_cast<size_t>(d)])
            row[static_cast<size_t>(*parent(d))] = 1;
    for (Dim d : kCoreDims)
        if (row[static_cast<size_t>(d)]) row[static_cast<size_t>(Dim::IN)] = 1;
}

struct AggregateOptions {
    // Unequal annotator counts across arguments: reject, or threshold each
    // argument against its own n.
    bool allow_unequal_counts = false;
};

inline LabelMatrix aggregate_strategy(const std::vector<AnnotationRecord>& records, Strategy strategy,
                                      const AggregateOptions& opts = {}) {
    std::map<std::string, std::vector<const AnnotationRecord*>> by_arg;
    for (const auto& r : records) by_arg[r.argument_id].push_back(&r);
    if (by_arg.empty()) throw std::invalid_argument("aggregate_strategy: no records");

    size_t n_common = by_arg.begin()->second.size();
    for (const auto& [id, group] : by_arg) {
        if (group.size() < 2)
            throw std::invalid_argument("aggregate_strategy: argument " + id + " has < 2 annotations");
        if (!opts.allow_unequal_counts && group.size() != n_common)
            throw std::invalid_argument("aggregate_strategy: unequal annotator counts (argument " + id + ")");
    }

    LabelMatrix out;
    out.provenance = provenance_of(strategy);
    out.argument_ids.reserve(by_arg.size());
    out.cells.reserve(by_arg.size());
    for (const auto& [id, group] : by_arg) {
        const size_t n = group.size();
        const size_t majority_need = (n + 2) / 2;  // ceil((n+1)/2)
        std::array<uint8_t, kDimCount> row{};
        for (Dim d : kAllDims) {
            size_t votes = 0;
            for (const auto* rec : group)
                votes += (d == Dim::IN) ? (binarize_in(rec->in_rating) ? 1 : 0) : (rec->flag(d) ? 1 : 0);
            bool yes = false;
            switch (strategy) {
                case Strategy::conservative: yes = votes >= 1; break;
                case Strategy::majority: yes = votes >= majority_need; break;
                case Strategy::liberal: yes = votes == n; break;
            }
            row[static_cast<size_t>(d)] = yes ? 1 : 0;
        }
        close_row(row);
        out.argument_ids.push_back(id);
        out.cells.push_back(row);
    }
    return out;
}

// Majority vote on the raw 3-level IN scale; no value with >= ceil((n+1)/2)
// votes falls back to the median (votes 1,2,3 -> 2).
inline int majority_rating(std::vector<int> votes) {
    if (votes.empty()) throw std::invalid_argument("majority_rating: no votes");
    for (int v : votes)
        if (v < 1 || v > 3) throw std::invalid_argument("majority_rating: rating out of range");
    const size_t need = (votes.size() + 2) / 2;
    std::array<size_t, 4> counts{};
    for (int v : votes) counts[static_cast<size_t>(v)]++;
    int best = 0;
    for (int v = 1; v <= 3; ++v)
        if (counts[static_cast<size_t>(v)] >= need && (best == 0 || counts[static_cast<size_t>(v)] > counts[static_cast<size_t>(best)]))
            best = v;
    if (best) return best;
    std::sort(votes.begin(), votes.end());
    return votes[(votes.size() - 1) / 2];
}

// --- LabelMatrix TSV: argument_id, 14 dimension columns, provenance ---

inline void write_label_matrix(std::ostream& out, const LabelMatrix& m) {
    std::vector<std::string> header = {"argument_id"};
    for (Dim d : kAllDims) header.emplace_back(dim_code(d));
    header.emplace_back("provenance");
    out << join_tsv(header) << '\n';
    for (size_t i = 0; i < m.size(); ++i) {
        std::vector<std::string> cells = {m.argument_ids[i]};
        for (Dim d : kAllDims) cells.emplace_back(m.label(i, d) ? "1" : "0");
        cells.emplace_back(provenance_name(m.provenance));
        out << join_tsv(cells) << '\n';
    }
}

inline LabelMatrix read_label_matrix(std::istream& in) {
    std::string line;
    if (!read_line(in, line)) throw std::runtime_error("label matrix: empty stream");
    const auto header = split_tsv(line);
    if (header.size() != kDimCount + 2 || header[0] != "argument_id" || header.back() != "provenance")
        throw std::runtime_error("label matrix: bad header");
    for (int i = 0; i < kDimCount; ++i)
        if (header[static_cast<size_t>(i) + 1] != dim_code(kAllDims[static_cast<size_t>(i)]))
            throw std::runtime_error("label matrix: bad header column " + header[static_cast<size_t>(i) + 1]);

    LabelMatrix m;
    bool provenance_seen = false;
    size_t line_no = 1;
    while (read_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split_tsv(line);
        if (cells.size() != kDimCount + 2)
            throw std::runtime_error("label matrix line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(kDimCount + 2) + " columns");
        std::array<uint8_t, kDimCount> row{};
        for (int i = 0; i < kDimCount; ++i) {
            const auto& c = cells[static_cast<size_t>(i) + 1];
            if (c != "0" && c != "1")
                throw std::runtime_error("label matrix line " + std::to_string(line_no) + ": cell must be 0/1");
            row[static_cast<size_t>(i)] = (c == "1") ? 1 : 0;
        }
        if (!provenance_seen) {
            const auto& p = cells.back();
            if (p == "liberal") m.provenance = Provenance::liberal;
            else if (p == "majority") m.provenance = Provenance::majority;
            else if (p == "conservative") m.provenance = Provenance::conservative;
            else if (p == "mace") m.provenance = Provenance::mace;
            else throw std::runtime_error("label matrix: unknown provenance " + p);
            provenance_seen = true;
        }
        m.argument_ids.push_back(cells[0]);
        m.cells.push_back(row);
    }
    // keep rows sorted by argument id
    std::vector<size_t> order(m.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return m.argument_ids[a] < m.argument_ids[b]; });
    LabelMatrix sorted;
    sorted.provenance = m.provenance;
    for (size_t i : order) {
        if (!sorted.argument_ids.empty() && sorted.argument_ids.back() == m.argument_ids[i])
            throw std::runtime_error("label matrix: duplicate argument_id " + m.argument_ids[i]);
        sorted.argument_ids.push_back(m.argument_ids[i]);
        sorted.cells.push_back(m.cells[i]);
    }
    return sorted;
}

}  // namespace inapt
