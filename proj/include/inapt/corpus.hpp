#pragma once
// Corpus data model, file ingestion, persistence and descriptive stats.
//
// Canonical file schemas (headers mandatory, TSV cells escaped, JSONL one
// object per line):
//   arguments:   argument_id  source  issue  text
//   annotations: argument_id  annotator_id  batch_id  IN  TE  EI  ED  MC
//                MS  MO  MI  UM  MR  CR  OR  DO  RU  ru_text
//   ratings:     argument_id  dimension_name  rater_id  score
//   pairs:       pair_id  more_convincing_id  less_convincing_id  reason_code
// Binary cells are 0/1, IN is 1/2/3, ru_text may be empty.

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <unistd.h>

#include <json.hpp>

#include "inapt/taxonomy.hpp"
#include "inapt/tsv.hpp"

namespace inapt {

using json = nlohmann::json;

enum class Source : uint8_t { dagstuhl, ukpconvarg2, gaq_debates, gaq_qa, gaq_reviews };
enum class Genre : uint8_t { debate, qa_forum, review };

inline constexpr std::array<Source, 5> kAllSources = {Source::dagstuhl, Source::ukpconvarg2,
                                                      Source::gaq_debates, Source::gaq_qa,
                                                      Source::gaq_reviews};

inline std::string_view source_name(Source s) {
    switch (s) {
        case Source::dagstuhl: return "dagstuhl";
        case Source::ukpconvarg2: return "ukpconvarg2";
        case Source::gaq_debates: return "gaq-debates";
        case Source::gaq_qa: return "gaq-qa";
        case Source::gaq_reviews: return "gaq-reviews";
    }
    return "?";
}

inline std::optional<Source> source_from_name(std::string_view name) {
    for (Source s : kAllSources)
        if (source_name(s) == name) return s;
    return std::nullopt;
}

// Genre is determined by the source.
inline Genre genre_of(Source s) {
    switch (s) {
        case Source::dagstuhl:
        case Source::ukpconvarg2:
        case Source::gaq_debates: return Genre::debate;
        case Source::gaq_qa: return Genre::qa_forum;
        case Source::gaq_reviews: return Genre::review;
    }
    return Genre::debate;
}

inline std::string_view genre_name(Genre g) {
    switch (g) {
        case Genre::debate: return "debate";
        case Genre::qa_forum: return "qa-forum";
        case Genre::review: return "review";
    }
    return "?";
}

struct Argument {
    std::string argument_id;
    Source source = Source::dagstuhl;
    std::string issue;
    std::string text;

    Genre genre() const { return genre_of(source); }
};

struct QualityRating {
    std::string argument_id;
    std::string dimension_name;
    std::string rater_id;
    int score = 0;  // 1..3
};

struct PairReason {
    std::string pair_id;
    std::string more_convincing_id;  // a
    std::string less_convincing_id;  // b
    std::string reason_code;
};

// Convincingness comparison reasons (17 + overall), table order.
struct ReasonInfo {
    std::string_view code;
    std::string_view label;
};

inline const std::vector<ReasonInfo>& pair_reason_catalog() {
    static const std::vector<ReasonInfo> catalog = {
        {"attacking-abusive", "b is attacking / abusive"},
        {"language-issues-humour-sarcasm", "b has language issues / humour / sarcasm"},
        {"unclear-hard-to-follow", "b is unclear / hard to follow"},
        {"no-credible-evidence", "b has no credible evidence / no facts"},
        {"insufficient-reasoning", "b has less or insufficient reasoning"},
        {"irrelevant-reasons", "b uses irrelevant reasons"},
        {"opinion-rant", "b is only an opinion / a rant"},
        {"nonsense-confusing", "b is non-sense / confusing"},
        {"off-topic", "b does not address the topic"},
        {"weak-vague", "b is generally weak / vague"},
        {"more-detailed-reasoned", "a is more detailed / better reasoned / deeper"},
        {"objective-other-views", "a is objective / discusses other views"},
        {"more-credible-confident", "a is more credible / confident"},
        {"clear-crisp-well-written", "a is clear / crisp / well-written"},
        {"sticks-to-topic", "a sticks to the topic"},
        {"makes-you-think", "a makes you think"},
        {"well-thought-through", "a is well thought through / smart"},
        {"overall", "a is more convincing than b"},
    };
    return catalog;
}

inline bool known_reason_code(std::string_view code) {
    for (const auto& r : pair_reason_catalog())
        if (r.code == code) return true;
    return false;
}

// Argument-quality rating dimensions of the external corpora, table order.
struct QualityDimInfo {
    std::string_view key;
    std::string_view label;
};

inline const std::vector<QualityDimInfo>& dagstuhl_quality_dims() {
    static const std::vector<QualityDimInfo> dims = {
        {"cogency", "Cogency"},
        {"local-acceptability", "Local acceptability"},
        {"local-relevance", "Local relevance"},
        {"local-sufficiency", "Local sufficiency"},
        {"effectiveness", "Effectiveness"},
        {"credibility", "Credibility"},
        {"emotional-appeal", "Emotional appeal"},
        {"clarity", "Clarity"},
        {"appropriateness", "Appropriateness"},
        {"arrangement", "Arrangement"},
        {"reasonableness", "Reasonableness"},
        {"global-acceptability", "Global acceptability"},
        {"global-relevance", "Global relevance"},
        {"global-sufficiency", "Global sufficiency"},
        {"overall-quality", "Overall quality"},
    };
    return dims;
}

inline const std::vector<QualityDimInfo>& gaq_quality_dims() {
    static const std::vector<QualityDimInfo> dims = {
        {"cogency", "Cogency"},
        {"effectiveness", "Effectiveness"},
        {"reasonableness", "Reasonableness"},
        {"overall-quality", "Overall quality"},
    };
    return dims;
}

// Deterministic sentence splitter behind the sentences-per-argument
// statistic: a boundary is a run of . ! ? followed by whitespace or end
// of text; empty segments do not count.
inline size_t sentence_count(std::string_view text) {
    size_t count = 0;
    bool segment_has_content = false;
    for (size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '.' || c == '!' || c == '?') {
            size_t j = i;
            while (j < text.size() && (text[j] == '.' || text[j] == '!' || text[j] == '?')) ++j;
            if (j == text.size() || std::isspace(static_cast<unsigned char>(text[j]))) {
                if (segment_has_content) ++count;
                segment_has_content = false;
                i = j - 1;
                continue;
            }
        }
        if (!std::isspace(static_cast<unsigned char>(c))) segment_has_content = true;
    }
    if (segment_has_content) ++count;
    return count;
}

enum class Format : uint8_t { tsv, jsonl };
enum class DupPolicy : uint8_t { error, skip };

struct LineIssue {
    size_t line = 0;
    std::string message;
};

struct IngestReport {
    size_t ingested = 0;
    size_t skipped = 0;  // duplicates under DupPolicy::skip
    std::vector<LineIssue> errors;    // aborted lines (parse/reference/duplicate)
    std::vector<LineIssue> rejected;  // strict-mode rule violations
    std::vector<LineIssue> repairs;   // lenient-mode closure repairs
    std::vector<LineIssue> warnings;

    bool clean() const { return errors.empty() && rejected.empty(); }
};

enum class GroupBy : uint8_t { none, source, genre };

struct GroupStats {
    size_t arguments = 0;
    size_t issues = 0;
    std::array<size_t, 3> genre_counts{};  // debate, qa-forum, review
    double mean_sentences = 0.0;
};

struct CorpusStats {
    GroupStats total;
    std::vector<std::pair<std::string, GroupStats>> groups;  // empty for GroupBy::none
};

class CorpusStore {
public:
    const std::vector<Argument>& arguments() const { return arguments_; }
    const std::vector<AnnotationRecord>& annotations() const { return annotations_; }
    const std::vector<QualityRating>& ratings() const { return ratings_; }
    const std::vector<PairReason>& pairs() const { return pairs_; }

    const Argument* find_argument(const std::string& id) const {
        auto it = arg_index_.find(id);
        return it == arg_index_.end() ? nullptr : &arguments_[it->second];
    }

    std::vector<std::string> annotator_ids() const {
        std::set<std::string> ids;
        for (const auto& r : annotations_) ids.insert(r.annotator_id);
        return {ids.begin(), ids.end()};
    }

    // --- ingestion ---

    IngestReport ingest_arguments(std::istream& in, Format fmt, DupPolicy dup = DupPolicy::error) {
        IngestReport report;
        for_each_row(in, fmt, report, {"argument_id", "source", "issue", "text"},
                     [&](size_t line, const std::vector<std::string>& cells, const json* obj) {
                         Argument a;
                         if (obj) {
                             a.argument_id = obj->at("argument_id").get<std::string>();
                             const auto src = source_from_name(obj->at("source").get<std::string>());
                             if (!src) { report.errors.push_back({line, "unknown source tag"}); return; }
                             a.source = *src;
                             a.issue = obj->at("issue").get<std::string>();
                             a.text = obj->at("text").get<std::string>();
                         } else {
                             a.argument_id = cells[0];
                             const auto src = source_from_name(cells[1]);
                             if (!src) { report.errors.push_back({line, "unknown source tag: " + cells[1]}); return; }
                             a.source = *src;
                             a.issue = cells[2];
                             a.text = cells[3];
                         }
                         if (a.argument_id.empty()) { report.errors.push_back({line, "empty argument_id"}); return; }
                         if (a.text.empty()) { report.errors.push_back({line, "empty text for " + a.argument_id}); return; }
                         if (arg_index_.count(a.argument_id)) {
                             if (dup == DupPolicy::skip) {
                                 report.skipped++;
                                 report.warnings.push_back({line, "duplicate argument_id skipped: " + a.argument_id});
                             } else {
                                 report.errors.push_back({line, "duplicate argument_id: " + a.argument_id});
                             }
                             return;
                         }
                         arg_index_[a.argument_id] = arguments_.size();
                         arguments_.push_back(std::move(a));
                         report.ingested++;
                     });
        return report;
    }

    IngestReport ingest_annotations(std::istream& in, Format fmt, ValidationMode mode,
                                    DupPolicy dup = DupPolicy::skip) {
        IngestReport report;
        read_annotation_rows(in, fmt, report, [&](size_t line, AnnotationRecord rec) {
            ingest_one_annotation(std::move(rec), line, mode, dup, report);
        });
        return report;
    }

    // Streams annotation rows to `fn(line, record)`; parse failures land in
    // the report. Shared by ingestion and the standalone validate path.
    template <typename Fn>
    void read_annotation_rows(std::istream& in, Format fmt, IngestReport& report, Fn&& fn) {
        std::vector<std::string> header = {"argument_id", "annotator_id", "batch_id"};
        for (Dim d : kAllDims) header.emplace_back(dim_code(d));
        header.emplace_back("ru_text");
        for_each_row(in, fmt, report, header,
                     [&](size_t line, const std::vector<std::string>& cells, const json* obj) {
                         AnnotationRecord rec;
                         if (obj) {
                             if (!parse_annotation_json(*obj, rec)) {
                                 report.errors.push_back({line, "malformed annotation object"});
                                 return;
                             }
                         } else if (!parse_annotation_cells(cells, rec)) {
                             report.errors.push_back({line, "malformed annotation row"});
                             return;
                         }
                         fn(line, std::move(rec));
                     });
    }

    IngestReport ingest_ratings(std::istream& in, Format fmt, DupPolicy dup = DupPolicy::error) {
        IngestReport report;
        for_each_row(in, fmt, report, {"argument_id", "dimension_name", "rater_id", "score"},
                     [&](size_t line, const std::vector<std::string>& cells, const json* obj) {
                         QualityRating r;
                         if (obj) {
                             r.argument_id = obj->at("argument_id").get<std::string>();
                             r.dimension_name = obj->at("dimension_name").get<std::string>();
                             r.rater_id = obj->at("rater_id").get<std::string>();
                             r.score = obj->at("score").get<int>();
                         } else {
                             const auto score = parse_int(cells[3]);
                             if (!score) { report.errors.push_back({line, "bad score: " + cells[3]}); return; }
                             r = {cells[0], cells[1], cells[2], static_cast<int>(*score)};
                         }
                         if (r.score < 1 || r.score > 3) {
                             report.errors.push_back({line, "score out of range for " + r.argument_id});
                             return;
                         }
                         if (!arg_index_.count(r.argument_id)) {
                             report.errors.push_back({line, "unknown argument_id: " + r.argument_id});
                             return;
                         }
                         const auto key = r.argument_id + '\x1f' + r.dimension_name + '\x1f' + r.rater_id;
                         if (rating_keys_.count(key)) {
                             if (dup == DupPolicy::skip) {
                                 report.skipped++;
                                 report.warnings.push_back({line, "duplicate rating skipped: " + key});
                             } else {
                                 report.errors.push_back({line, "duplicate rating: " + key});
                             }
                             return;
                         }
                         rating_keys_.insert(key);
                         ratings_.push_back(std::move(r));
                         report.ingested++;
                     });
        return report;
    }

    IngestReport ingest_pairs(std::istream& in, Format fmt, DupPolicy dup = DupPolicy::error) {
        IngestReport report;
        for_each_row(in, fmt, report,
                     {"pair_id", "more_convincing_id", "less_convincing_id", "reason_code"},
                     [&](size_t line, const std::vector<std::string>& cells, const json* obj) {
                         PairReason p;
                         if (obj) {
                             p.pair_id = obj->at("pair_id").get<std::string>();
                             p.more_convincing_id = obj->at("more_convincing_id").get<std::string>();
                             p.less_convincing_id = obj->at("less_convincing_id").get<std::string>();
                             p.reason_code = obj->at("reason_code").get<std::string>();
                         } else {
                             p = {cells[0], cells[1], cells[2], cells[3]};
                         }
                         if (p.more_convincing_id == p.less_convincing_id) {
                             report.errors.push_back({line, "pair references the same argument twice: " + p.pair_id});
                             return;
                         }
                         if (!known_reason_code(p.reason_code)) {
                             report.errors.push_back({line, "unknown reason_code: " + p.reason_code});
                             return;
                         }
                         if (!arg_index_.count(p.more_convincing_id) || !arg_index_.count(p.less_convincing_id)) {
                             report.errors.push_back({line, "pair references unknown argument: " + p.pair_id});
                             return;
                         }
                         const auto key = p.pair_id + '\x1f' + p.reason_code;
                         if (pair_keys_.count(key)) {
                             if (dup == DupPolicy::skip) {
                                 report.skipped++;
                                 report.warnings.push_back({line, "duplicate pair reason skipped: " + key});
                             } else {
                                 report.errors.push_back({line, "duplicate pair reason: " + key});
                             }
                             return;
                         }
                         pair_keys_.insert(key);
                         pairs_.push_back(std::move(p));
                         report.ingested++;
                     });
        return report;
    }

    // Accepts a pre-built record (service path, adapter path); same checks
    // as file ingestion.
    void ingest_one_annotation(AnnotationRecord rec, size_t line, ValidationMode mode, DupPolicy dup,
                               IngestReport& report) {
        if (!arg_index_.count(rec.argument_id)) {
            report.errors.push_back({line, "unknown argument_id: " + rec.argument_id});
            return;
        }
        const auto key = rec.argument_id + '\x1f' + rec.annotator_id;
        if (annotation_keys_.count(key)) {
            if (dup == DupPolicy::skip) {
                report.skipped++;
                report.warnings.push_back({line, "duplicate annotation skipped: " + key});
            } else {
                report.errors.push_back({line, "duplicate annotation: " + key});
            }
            return;
        }
        auto result = validate(rec, mode);
        if (!result.well_formed()) {
            std::string msg = "malformed record:";
            for (const auto& s : result.structural) msg += ' ' + s;
            report.errors.push_back({line, msg});
            return;
        }
        if (mode == ValidationMode::strict && !result.violations.empty()) {
            std::string msg = "rejected:";
            for (const auto& v : result.violations) msg += ' ' + v.message + ';';
            report.rejected.push_back({line, msg});
            return;
        }
        if (mode == ValidationMode::lenient) {
            AnnotationRecord closed = close_record(rec);
            if (closed.flags != rec.flags || closed.in_rating != rec.in_rating) {
                std::string msg = "repaired " + rec.argument_id + '/' + rec.annotator_id + ':';
                for (Dim d : kAllDims)
                    if (closed.flags[static_cast<size_t>(d)] != rec.flags[static_cast<size_t>(d)])
                        msg += ' ' + std::string(dim_code(d)) + "->yes";
                if (closed.in_rating != rec.in_rating) msg += " IN->2";
                report.repairs.push_back({line, msg});
                rec = std::move(closed);
            }
        }
        annotation_keys_.insert(key);
        annotations_.push_back(std::move(rec));
        report.ingested++;
    }

    // --- exports (canonical schemas, insertion order) ---

    void export_arguments(std::ostream& out, Format fmt) const {
        if (fmt == Format::tsv) out << join_tsv({"argument_id", "source", "issue", "text"}) << '\n';
        for (const auto& a : arguments_) {
            if (fmt == Format::tsv) {
                out << join_tsv({a.argument_id, std::string(source_name(a.source)), a.issue, a.text}) << '\n';
            } else {
                json obj = {{"argument_id", a.argument_id},
                            {"source", std::string(source_name(a.source))},
                            {"issue", a.issue},
                            {"text", a.text}};
                out << obj.dump() << '\n';
            }
        }
    }

    void export_annotations(std::ostream& out, Format fmt) const {
        if (fmt == Format::tsv) {
            std::vector<std::string> header = {"argument_id", "annotator_id", "batch_id"};
            for (Dim d : kAllDims) header.emplace_back(dim_code(d));
            header.emplace_back("ru_text");
            out << join_tsv(header) << '\n';
        }
        for (const auto& r : annotations_) {
            if (fmt == Format::tsv) {
                std::vector<std::string> cells = {r.argument_id, r.annotator_id, r.batch_id};
                cells.push_back(std::to_string(r.in_rating));
                for (Dim d : kAllDims)
                    if (d != Dim::IN) cells.emplace_back(r.flag(d) ? "1" : "0");
                cells.push_back(r.ru_free_text.value_or(""));
                out << join_tsv(cells) << '\n';
            } else {
                out << annotation_to_json(r).dump() << '\n';
            }
        }
    }

    void export_ratings(std::ostream& out, Format fmt) const {
        if (fmt == Format::tsv) out << join_tsv({"argument_id", "dimension_name", "rater_id", "score"}) << '\n';
        for (const auto& r : ratings_) {
            if (fmt == Format::tsv) {
                out << join_tsv({r.argument_id, r.dimension_name, r.rater_id, std::to_string(r.score)}) << '\n';
            } else {
                json obj = {{"argument_id", r.argument_id},
                            {"dimension_name", r.dimension_name},
                            {"rater_id", r.rater_id},
                            {"score", r.score}};
                out << obj.dump() << '\n';
            }
        }
    }

    void export_pairs(std::ostream& out, Format fmt) const {
        if (fmt == Format::tsv)
            out << join_tsv({"pair_id", "more_convincing_id", "less_convincing_id", "reason_code"}) << '\n';
        for (const auto& p : pairs_) {
            if (fmt == Format::tsv) {
                out << join_tsv({p.pair_id, p.more_convincing_id, p.less_convincing_id, p.reason_code}) << '\n';
            } else {
                json obj = {{"pair_id", p.pair_id},
                            {"more_convincing_id", p.more_convincing_id},
                            {"less_convincing_id", p.less_convincing_id},
                            {"reason_code", p.reason_code}};
                out << obj.dump() << '\n';
            }
        }
    }

    static json annotation_to_json(const AnnotationRecord& r) {
        json flags = json::object();
        for (Dim d : kAllDims)
            if (d != Dim::IN) flags[std::string(dim_code(d))] = r.flag(d) ? 1 : 0;
        json obj = {{"argument_id", r.argument_id},
                    {"annotator_id", r.annotator_id},
                    {"batch_id", r.batch_id},
                    {"IN", r.in_rating},
                    {"flags", flags}};
        if (r.ru_free_text) obj["ru_text"] = *r.ru_free_text;
        return obj;
    }

    // --- descriptive statistics ---

    CorpusStats stats(GroupBy group_by) const {
        CorpusStats out;
        out.total = stats_over([](const Argument&) { return true; });
        if (group_by == GroupBy::source) {
            for (Source s : kAllSources)
                out.groups.emplace_back(std::string(source_name(s)),
                                        stats_over([s](const Argument& a) { return a.source == s; }));
        } else if (group_by == GroupBy::genre) {
            for (Genre g : {Genre::debate, Genre::qa_forum, Genre::review})
                out.groups.emplace_back(std::string(genre_name(g)),
                                        stats_over([g](const Argument& a) { return a.genre() == g; }));
        }
        return out;
    }

private:
    template <typename Pred>
    GroupStats stats_over(Pred&& include) const {
        GroupStats g;
        std::set<std::string> issues;
        size_t total_sentences = 0;
        for (const auto& a : arguments_) {
            if (!include(a)) continue;
            g.arguments++;
            issues.insert(a.issue);
            g.genre_counts[static_cast<size_t>(a.genre())]++;
            total_sentences += sentence_count(a.text);
        }
        g.issues = issues.size();
        g.mean_sentences = g.arguments ? static_cast<double>(total_sentences) / static_cast<double>(g.arguments) : 0.0;
        return g;
    }

    template <typename Fn>
    void for_each_row(std::istream& in, Format fmt, IngestReport& report,
                      const std::vector<std::string>& tsv_header, Fn&& fn) {
        std::string line;
        size_t line_no = 0;
        if (fmt == Format::tsv) {
            if (!read_line(in, line)) return;  // empty file: zero rows
            ++line_no;
            if (split_tsv(line) != tsv_header) {
                report.errors.push_back({line_no, "bad header (expected " + join_tsv(tsv_header) + ")"});
                return;
            }
        }
        while (read_line(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            if (fmt == Format::tsv) {
                const auto cells = split_tsv(line);
                if (cells.size() != tsv_header.size()) {
                    report.errors.push_back({line_no, "expected " + std::to_string(tsv_header.size()) +
                                                          " columns, got " + std::to_string(cells.size())});
                    continue;
                }
                fn(line_no, cells, nullptr);
            } else {
                json obj = json::parse(line, nullptr, false);
                if (obj.is_discarded() || !obj.is_object()) {
                    report.errors.push_back({line_no, "bad json"});
                    continue;
                }
                try {
                    fn(line_no, {}, &obj);
                } catch (const json::exception& e) {
                    report.errors.push_back({line_no, std::string("bad json: ") + e.what()});
                }
            }
        }
    }

    static bool parse_annotation_cells(const std::vector<std::string>& cells, AnnotationRecord& rec) {
        rec.argument_id = cells[0];
        rec.annotator_id = cells[1];
        rec.batch_id = cells[2];
        const auto rating = parse_int(cells[3]);
        if (!rating) return false;
        rec.in_rating = static_cast<int>(*rating);
        for (int i = 1; i < kDimCount; ++i) {
            const auto& c = cells[static_cast<size_t>(i) + 3];
            if (c == "0") rec.flags[static_cast<size_t>(i)] = 0;
            else if (c == "1") rec.flags[static_cast<size_t>(i)] = 1;
            // anything else stays missing -> structural error downstream
        }
        if (!cells.back().empty()) rec.ru_free_text = cells.back();
        return rec.argument_id.size() && rec.annotator_id.size();
    }

    static bool parse_annotation_json(const json& obj, AnnotationRecord& rec) {
        rec.argument_id = obj.at("argument_id").get<std::string>();
        rec.annotator_id = obj.at("annotator_id").get<std::string>();
        rec.batch_id = obj.value("batch_id", std::string());
        if (!obj.contains("IN") || !obj.at("IN").is_number_integer()) return false;
        rec.in_rating = obj.at("IN").get<int>();
        if (obj.contains("flags") && obj.at("flags").is_object()) {
            for (Dim d : kAllDims) {
                if (d == Dim::IN) continue;
                const auto key = std::string(dim_code(d));
                if (obj.at("flags").contains(key)) {
                    const auto& v = obj.at("flags").at(key);
                    if (v.is_number_integer() && (v.get<int>() == 0 || v.get<int>() == 1))
                        rec.flags[static_cast<size_t>(d)] = static_cast<int8_t>(v.get<int>());
                }
            }
        }
        if (obj.contains("ru_text") && obj.at("ru_text").is_string()) {
            const auto text = obj.at("ru_text").get<std::string>();
            if (!text.empty()) rec.ru_free_text = text;
        }
        return !rec.argument_id.empty() && !rec.annotator_id.empty();
    }

    std::vector<Argument> arguments_;
    std::unordered_map<std::string, size_t> arg_index_;
    std::vector<AnnotationRecord> annotations_;
    std::unordered_set<std::string> annotation_keys_;  // argument \x1f annotator
    std::vector<QualityRating> ratings_;
    std::unordered_set<std::string> rating_keys_;
    std::vector<PairReason> pairs_;
    std::unordered_set<std::string> pair_keys_;
};

// --- store directory: append-only canonical files + advisory lock ---

namespace fs = std::filesystem;

inline const char* kArgumentsFile = "arguments.tsv";
inline const char* kAnnotationsFile = "annotations.tsv";
inline const char* kRatingsFile = "quality_ratings.tsv";
inline const char* kPairsFile = "pair_reasons.tsv";

// Single writer per store directory. Lock file carries the owner pid.
class StoreLock {
public:
    explicit StoreLock(const fs::path& dir) : path_(dir / ".lock") {
        fs::create_directories(dir);
        std::error_code ec;
        // O_EXCL semantics via noreplace open is not portable pre-C++23;
        // use create-if-absent + ownership check.
        if (fs::exists(path_))
            throw std::runtime_error("store is locked by another writer: " + path_.string());
        std::ofstream f(path_);
        if (!f) throw std::runtime_error("cannot create lock file: " + path_.string());
        f << ::getpid() << '\n';
    }
    StoreLock(const StoreLock&) = delete;
    StoreLock& operator=(const StoreLock&) = delete;
    ~StoreLock() {
        std::error_code ec;
        fs::remove(path_, ec);
    }

private:
    fs::path path_;
};

// Immutable snapshot: reads whatever canonical files exist in the
// directory. Lenient mode keeps legacy dumps loadable; files written by
// this workbench always pass strict validation again.
inline CorpusStore load_store(const fs::path& dir, ValidationMode mode = ValidationMode::lenient,
                              IngestReport* combined = nullptr) {
    CorpusStore store;
    auto run = [&](const char* name, auto&& fn) {
        const fs::path p = dir / name;
        if (!fs::exists(p)) return;
        std::ifstream in(p);
        if (!in) throw std::runtime_error("cannot open " + p.string());
        IngestReport r = fn(in);
        if (!r.errors.empty())
            throw std::runtime_error(p.string() + ": " + std::to_string(r.errors.size()) +
                                     " bad lines (first: line " + std::to_string(r.errors[0].line) + ", " +
                                     r.errors[0].message + ")");
        if (combined) {
            combined->ingested += r.ingested;
            combined->skipped += r.skipped;
            for (auto& v : r.rejected) combined->rejected.push_back(std::move(v));
            for (auto& v : r.repairs) combined->repairs.push_back(std::move(v));
            for (auto& v : r.warnings) combined->warnings.push_back(std::move(v));
        }
    };
    run(kArgumentsFile, [&](std::istream& in) { return store.ingest_arguments(in, Format::tsv); });
    run(kAnnotationsFile, [&](std::istream& in) { return store.ingest_annotations(in, Format::tsv, mode); });
    run(kRatingsFile, [&](std::istream& in) { return store.ingest_ratings(in, Format::tsv); });
    run(kPairsFile, [&](std::istream& in) { return store.ingest_pairs(in, Format::tsv); });
    return store;
}

// Writes the canonical files; the caller must hold the store lock.
inline void write_store_files(const fs::path& dir, const CorpusStore& store) {
    fs::create_directories(dir);
    auto write = [&](const char* name, auto&& fn) {
        std::ofstream out(dir / name, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
        fn(out);
    };
    write(kArgumentsFile, [&](std::ostream& o) { store.export_arguments(o, Format::tsv); });
    write(kAnnotationsFile, [&](std::ostream& o) { store.export_annotations(o, Format::tsv); });
    write(kRatingsFile, [&](std::ostream& o) { store.export_ratings(o, Format::tsv); });
    write(kPairsFile, [&](std::ostream& o) { store.export_pairs(o, Format::tsv); });
}

inline void save_store(const fs::path& dir, const CorpusStore& store) {
    StoreLock lock(dir);
    write_store_files(dir, store);
}

}  // namespace inapt
