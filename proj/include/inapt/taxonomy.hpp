#pragma once
// The 14-dimension inappropriateness taxonomy.
//
// IN is the ordinal root (1 = fully inappropriate, 2 = partially
// (in)appropriate, 3 = fully appropriate). Four core reasons hang off it
// (TE, MC, MI, OR), nine binary sub-dimensions hang off the cores:
//
//   IN ── TE ── EI, ED
//      ── MC ── MS, MO
//      ── MI ── UM, MR, CR
//      ── OR ── DO, RU
//
// The two-letter codes are the stable vocabulary used by every file
// format and wire payload in the workbench.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace inapt {

enum class Dim : uint8_t { IN = 0, TE, EI, ED, MC, MS, MO, MI, UM, MR, CR, OR, DO, RU };

inline constexpr int kDimCount = 14;

inline constexpr std::array<Dim, kDimCount> kAllDims = {
    Dim::IN, Dim::TE, Dim::EI, Dim::ED, Dim::MC, Dim::MS, Dim::MO,
    Dim::MI, Dim::UM, Dim::MR, Dim::CR, Dim::OR, Dim::DO, Dim::RU};

inline constexpr std::array<Dim, 4> kCoreDims = {Dim::TE, Dim::MC, Dim::MI, Dim::OR};

enum class Scale : uint8_t { ordinal3, binary };
enum class Level : uint8_t { root, core, sub };

struct DimInfo {
    Dim code;
    std::optional<Dim> parent;
    Scale scale;
    Level level;
    std::string_view acronym;
    std::string_view name;
};

// Fixed hierarchy, table order. Index == static_cast<int>(Dim).
inline const std::array<DimInfo, kDimCount>& dimensions() {
    static const std::array<DimInfo, kDimCount> table = {{
        {Dim::IN, std::nullopt, Scale::ordinal3, Level::root, "IN", "Inappropriateness"},
        {Dim::TE, Dim::IN, Scale::binary, Level::core, "TE", "Toxic Emotions"},
        {Dim::EI, Dim::TE, Scale::binary, Level::sub, "EI", "Excessive Intensity"},
        {Dim::ED, Dim::TE, Scale::binary, Level::sub, "ED", "Emotional Deception"},
        {Dim::MC, Dim::IN, Scale::binary, Level::core, "MC", "Missing Commitment"},
        {Dim::MS, Dim::MC, Scale::binary, Level::sub, "MS", "Missing Seriousness"},
        {Dim::MO, Dim::MC, Scale::binary, Level::sub, "MO", "Missing Openness"},
        {Dim::MI, Dim::IN, Scale::binary, Level::core, "MI", "Missing Intelligibility"},
        {Dim::UM, Dim::MI, Scale::binary, Level::sub, "UM", "Unclear Meaning"},
        {Dim::MR, Dim::MI, Scale::binary, Level::sub, "MR", "Missing Relevance"},
        {Dim::CR, Dim::MI, Scale::binary, Level::sub, "CR", "Confusing Reasoning"},
        {Dim::OR, Dim::IN, Scale::binary, Level::core, "OR", "Other Reasons"},
        {Dim::DO, Dim::OR, Scale::binary, Level::sub, "DO", "Detrimental Orthography"},
        {Dim::RU, Dim::OR, Scale::binary, Level::sub, "RU", "Reason Unclassified"},
    }};
    return table;
}

inline const DimInfo& dim_info(Dim d) { return dimensions()[static_cast<size_t>(d)]; }
inline std::optional<Dim> parent(Dim d) { return dim_info(d).parent; }
inline Level level(Dim d) { return dim_info(d).level; }
inline std::string_view dim_code(Dim d) { return dim_info(d).acronym; }
inline std::string_view dim_name(Dim d) { return dim_info(d).name; }

inline std::optional<Dim> dim_from_code(std::string_view code) {
    for (const auto& info : dimensions())
        if (info.acronym == code) return info.code;
    return std::nullopt;
}

inline std::vector<Dim> children_of(Dim d) {
    std::vector<Dim> out;
    for (const auto& info : dimensions())
        if (info.parent && *info.parent == d) out.push_back(info.code);
    return out;
}

// One annotator's full judgment of one argument. Flag cells are tri-state
// so a partially parsed record can be told apart from a complete one:
// -1 missing, 0 no, 1 yes. The IN slot of `flags` is unused.
struct AnnotationRecord {
    std::string argument_id;
    std::string annotator_id;
    std::string batch_id;
    int in_rating = 0;  // 1..3; anything else = structurally invalid
    std::array<int8_t, kDimCount> flags = {-1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1};
    std::optional<std::string> ru_free_text;
    int64_t submitted_at = 0;  // unix seconds; 0 when unknown (plain file import)

    bool flag(Dim d) const { return flags[static_cast<size_t>(d)] == 1; }
    void set_flag(Dim d, bool yes) { flags[static_cast<size_t>(d)] = yes ? 1 : 0; }
};

enum class ValidationMode : uint8_t { strict, lenient };

enum class Rule : uint8_t {
    sub_without_parent,        // sub = yes but its core = no
    core_without_rating,       // core = yes but in_rating = 3
    rating_without_reason,     // in_rating in {1,2} but no core = yes
    free_text_without_ru,      // ru_free_text present but RU = no
};

inline std::string_view rule_name(Rule r) {
    switch (r) {
        case Rule::sub_without_parent: return "sub-without-parent";
        case Rule::core_without_rating: return "core-without-inappropriateness";
        case Rule::rating_without_reason: return "inappropriateness-without-reason";
        case Rule::free_text_without_ru: return "free-text-without-ru";
    }
    return "?";
}

struct Violation {
    Rule rule;
    Dim dim;
    std::string message;
};

struct ValidationResult {
    // Malformed record (missing flag, out-of-range rating): distinct from
    // rule violations.
    std::vector<std::string> structural;
    std::vector<Violation> violations;
    // Non-fatal observations (core = yes with no sub = yes). Never fails
    // a record.
    std::vector<Violation> warnings;

    bool well_formed() const { return structural.empty(); }
    bool ok() const { return structural.empty() && violations.empty(); }
};

inline ValidationResult validate(const AnnotationRecord& rec, ValidationMode mode) {
    ValidationResult res;
    if (rec.in_rating < 1 || rec.in_rating > 3)
        res.structural.push_back("in_rating out of range: " + std::to_string(rec.in_rating));
    for (Dim d : kAllDims) {
        if (d == Dim::IN) continue;
        const int8_t v = rec.flags[static_cast<size_t>(d)];
        if (v != 0 && v != 1)
            res.structural.push_back("missing flag: " + std::string(dim_code(d)));
    }
    if (!res.structural.empty()) return res;

    for (Dim d : kAllDims) {
        if (level(d) != Level::sub) continue;
        if (rec.flag(d) && !rec.flag(*parent(d)))
            res.violations.push_back({Rule::sub_without_parent, d,
                                      std::string(dim_code(d)) + " = yes but " +
                                          std::string(dim_code(*parent(d))) + " = no"});
    }
    if (mode == ValidationMode::strict) {
        bool any_core = false;
        for (Dim d : kCoreDims) any_core |= rec.flag(d);
        for (Dim d : kCoreDims)
            if (rec.flag(d) && rec.in_rating == 3)
                res.violations.push_back({Rule::core_without_rating, d,
                                          std::string(dim_code(d)) + " = yes but argument rated fully appropriate"});
        if (rec.in_rating != 3 && !any_core)
            res.violations.push_back({Rule::rating_without_reason, Dim::IN,
                                      "rated (partially) inappropriate but no core reason selected"});
        if (rec.ru_free_text && !rec.flag(Dim::RU))
            res.violations.push_back({Rule::free_text_without_ru, Dim::RU,
                                      "free-text reason given but RU = no"});
    }
    for (Dim core : kCoreDims) {
        if (!rec.flag(core)) continue;
        bool any_sub = false;
        for (Dim s : kAllDims)
            if (level(s) == Level::sub && *parent(s) == core) any_sub |= rec.flag(s);
        if (!any_sub)
            res.warnings.push_back({Rule::sub_without_parent, core,
                                    std::string(dim_code(core)) + " = yes with no sub-dimension selected"});
    }
    return res;
}

// Upward closure repair for imported records: propagate every yes to its
// ancestors (sub yes => core yes; any core yes and rating 3 => rating 2).
// Idempotent; never turns a yes into a no; does not touch free text.
inline AnnotationRecord close_record(const AnnotationRecord& rec) {
    AnnotationRecord out = rec;
    for (Dim d : kAllDims)
        if (level(d) == Level::sub && out.flag(d)) out.set_flag(*parent(d), true);
    bool any_core = false;
    for (Dim d : kCoreDims) any_core |= out.flag(d);
    if (any_core && out.in_rating == 3) out.in_rating = 2;
    return out;
}

}  // namespace inapt
