#pragma once
// Annotation campaign server: serves arguments batch-by-batch, enforces
// strict validation and the one-batch-per-window pacing rule, stores
// records durably (append + fsync before acknowledgment), exposes
// progress and analysis exports.
//
// JSON API:
//   POST /campaigns                       create (admin token)
//   GET  /campaigns/{id}/next?annotator=  next item | pacing-block | done
//   POST /campaigns/{id}/submit           accepted | rejected(violations)
//   GET  /campaigns/{id}/progress
//   GET  /campaigns/{id}/export/{kind}    annotations | conservative-gold |
//                                         agreement | correlations
// Annotators authenticate with a bearer token from the campaign roster.

#include <fcntl.h>
#include <unistd.h>

#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <httplib.h>

#include "inapt/aggregate.hpp"
#include "inapt/analysis.hpp"
#include "inapt/corpus.hpp"
#include "inapt/report.hpp"
#include "inapt/rng.hpp"

namespace inapt {

using Clock = std::function<int64_t()>;

inline int64_t system_clock_seconds() { return static_cast<int64_t>(::time(nullptr)); }

// Seeded shuffle, contiguous slices, sizes differing by at most one.
inline std::vector<std::vector<std::string>> plan_batches(std::vector<std::string> ids, size_t batch_size,
                                                          uint64_t seed) {
    if (batch_size < 1) throw std::invalid_argument("plan_batches: batch_size < 1");
    if (ids.empty()) throw std::invalid_argument("plan_batches: empty corpus");
    Rng rng(seed);
    rng.shuffle(ids);
    const size_t n = ids.size();
    const size_t batches = (n + batch_size - 1) / batch_size;
    std::vector<std::vector<std::string>> out(batches);
    size_t cursor = 0;
    for (size_t b = 0; b < batches; ++b) {
        size_t size = n / batches + (b < n % batches ? 1 : 0);
        for (size_t i = 0; i < size; ++i) out[b].push_back(ids[cursor++]);
    }
    return out;
}

struct RosterEntry {
    std::string annotator_id;
    std::string token;
};

struct CampaignConfig {
    std::string campaign_id;
    std::vector<RosterEntry> roster;
    size_t batch_size = 150;
    uint64_t seed = 0;
    int64_t pacing_window_seconds = 86400;
};

// Append-only record log; every accepted line is fsync'ed before the
// caller acknowledges, so a SIGKILL after the ack cannot lose it.
class DurableLog {
public:
    explicit DurableLog(const std::filesystem::path& path) {
        fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
        if (fd_ < 0) throw std::runtime_error("cannot open log: " + path.string());
    }
    DurableLog(const DurableLog&) = delete;
    DurableLog& operator=(const DurableLog&) = delete;
    ~DurableLog() {
        if (fd_ >= 0) ::close(fd_);
    }

    void append(const std::string& line) {
        std::string data = line + '\n';
        size_t off = 0;
        while (off < data.size()) {
            const ssize_t w = ::write(fd_, data.data() + off, data.size() - off);
            if (w < 0) throw std::runtime_error("log write failed");
            off += static_cast<size_t>(w);
        }
        if (::fsync(fd_) != 0) throw std::runtime_error("log fsync failed");
    }

private:
    int fd_ = -1;
};

struct NextItem {
    enum class Status { item, pacing_blocked, done } status;
    std::string argument_id;
    size_t batch_index = 0;
    size_t position = 0;      // answered items in current batch
    size_t batch_total = 0;
    size_t items_done = 0;    // across the campaign
    size_t items_total = 0;
    int64_t unblock_at = 0;   // pacing_blocked only
};

struct SubmitOutcome {
    bool accepted = false;
    std::vector<std::string> violations;  // verbatim rule texts for the UI
    std::string error;                    // stale item, unknown annotator, ...
    int revision = 0;
};

class Campaign {
public:
    Campaign(std::filesystem::path dir, CampaignConfig cfg, std::vector<std::vector<std::string>> batches,
             Clock clock)
        : dir_(std::move(dir)), cfg_(std::move(cfg)), batches_(std::move(batches)), clock_(std::move(clock)) {
        std::filesystem::create_directories(dir_);
        index_batches();
        json doc = {{"campaign_id", cfg_.campaign_id},
                    {"batch_size", cfg_.batch_size},
                    {"seed", cfg_.seed},
                    {"pacing_window_seconds", cfg_.pacing_window_seconds},
                    {"roster", json::array()},
                    {"batches", batches_}};
        for (const auto& r : cfg_.roster)
            doc["roster"].push_back({{"annotator_id", r.annotator_id}, {"token", r.token}});
        std::ofstream f(dir_ / "campaign.json", std::ios::trunc);
        f << doc.dump(2) << '\n';
        f.flush();
        log_ = std::make_unique<DurableLog>(dir_ / "records.jsonl");
    }

    // Rebuild from campaign.json + records.jsonl (crash recovery).
    static std::unique_ptr<Campaign> load(const std::filesystem::path& dir, Clock clock) {
        std::ifstream f(dir / "campaign.json");
        if (!f) throw std::runtime_error("no campaign at " + dir.string());
        json doc = json::parse(f);
        CampaignConfig cfg;
        cfg.campaign_id = doc.at("campaign_id").get<std::string>();
        cfg.batch_size = doc.at("batch_size").get<size_t>();
        cfg.seed = doc.at("seed").get<uint64_t>();
        cfg.pacing_window_seconds = doc.at("pacing_window_seconds").get<int64_t>();
        for (const auto& r : doc.at("roster"))
            cfg.roster.push_back({r.at("annotator_id").get<std::string>(), r.at("token").get<std::string>()});
        auto campaign = std::unique_ptr<Campaign>(
            new Campaign(dir, std::move(cfg), doc.at("batches").get<std::vector<std::vector<std::string>>>(),
                         std::move(clock), /*replay=*/true));
        return campaign;
    }

    const CampaignConfig& config() const { return cfg_; }
    const std::vector<std::vector<std::string>>& batches() const { return batches_; }

    const RosterEntry* roster_entry(const std::string& annotator) const {
        for (const auto& r : cfg_.roster)
            if (r.annotator_id == annotator) return &r;
        return nullptr;
    }

    NextItem next_item(const std::string& annotator) const {
        if (!roster_entry(annotator)) throw std::invalid_argument("unknown annotator: " + annotator);
        std::lock_guard<std::mutex> hold(mu_);
        return next_item_locked(annotator);
    }

    SubmitOutcome submit(const std::string& annotator, AnnotationRecord rec) {
        std::lock_guard<std::mutex> hold(mu_);
        SubmitOutcome out;
        if (!roster_entry(annotator)) {
            out.error = "unknown annotator: " + annotator;
            return out;
        }
        const auto batch_it = batch_of_.find(rec.argument_id);
        if (batch_it == batch_of_.end()) {
            out.error = "unknown or stale argument_id: " + rec.argument_id;
            return out;
        }
        const size_t batch = batch_it->second;
        auto& state = annotator_state_[annotator];
        const size_t current = current_batch_locked(state);
        if (batch > current) {
            out.error = "item not issued yet (argument belongs to a later batch)";
            return out;
        }
        if (batch == current && state.answered_in(batch, batches_[batch]) == 0) {
            const int64_t unblock = pacing_unblock_locked(state);
            if (unblock > clock_()) {
                out.error = "pacing-blocked until " + std::to_string(unblock);
                return out;
            }
        }
        rec.annotator_id = annotator;
        rec.batch_id = "batch-" + std::to_string(batch);
        const auto result = validate(rec, ValidationMode::strict);
        if (!result.well_formed()) {
            for (const auto& s : result.structural) out.violations.push_back(s);
            return out;
        }
        if (!result.violations.empty()) {
            for (const auto& v : result.violations) out.violations.push_back(v.message);
            return out;
        }
        rec.submitted_at = clock_();
        const int revision = ++revision_count_[annotator + '\x1f' + rec.argument_id];
        json line = CorpusStore::annotation_to_json(rec);
        line["submitted_at"] = rec.submitted_at;
        line["revision"] = revision;
        log_->append(line.dump());  // durability before acknowledgment
        apply_record_locked(rec);
        out.accepted = true;
        out.revision = revision;
        return out;
    }

    json progress() const {
        std::lock_guard<std::mutex> hold(mu_);
        json out = {{"campaign_id", cfg_.campaign_id},
                    {"batches", batches_.size()},
                    {"items_total", batch_of_.size()},
                    {"annotators", json::array()}};
        for (const auto& r : cfg_.roster) {
            const auto it = annotator_state_.find(r.annotator_id);
            size_t done = 0, batches_done = 0;
            if (it != annotator_state_.end()) {
                done = it->second.records.size();
                batches_done = it->second.completed_at.size();
            }
            out["annotators"].push_back({{"annotator_id", r.annotator_id},
                                         {"items_done", done},
                                         {"batches_done", batches_done}});
        }
        return out;
    }

    // Latest accepted record per (annotator, argument), deterministic order.
    std::vector<AnnotationRecord> latest_records() const {
        std::lock_guard<std::mutex> hold(mu_);
        std::map<std::pair<std::string, std::string>, AnnotationRecord> sorted;
        for (const auto& [annotator, state] : annotator_state_)
            for (const auto& [arg, rec] : state.records) sorted[{arg, annotator}] = rec;
        std::vector<AnnotationRecord> out;
        out.reserve(sorted.size());
        for (auto& [key, rec] : sorted) out.push_back(std::move(rec));
        return out;
    }

private:
    struct AnnotatorState {
        std::map<std::string, AnnotationRecord> records;  // argument -> latest
        std::map<size_t, int64_t> completed_at;           // batch -> completion time

        size_t answered_in(size_t batch, const std::vector<std::string>& batch_items) const {
            size_t n = 0;
            for (const auto& id : batch_items) n += records.count(id);
            return n;
        }
    };

    Campaign(std::filesystem::path dir, CampaignConfig cfg, std::vector<std::vector<std::string>> batches,
             Clock clock, bool /*replay*/)
        : dir_(std::move(dir)), cfg_(std::move(cfg)), batches_(std::move(batches)), clock_(std::move(clock)) {
        index_batches();
        std::ifstream in(dir_ / "records.jsonl");
        std::string line;
        while (in && read_line(in, line)) {
            if (line.empty()) continue;
            json obj = json::parse(line, nullptr, false);
            if (obj.is_discarded()) continue;  // torn tail write from a crash
            AnnotationRecord rec;
            rec.argument_id = obj.value("argument_id", std::string());
            rec.annotator_id = obj.value("annotator_id", std::string());
            rec.batch_id = obj.value("batch_id", std::string());
            rec.in_rating = obj.value("IN", 0);
            if (obj.contains("flags"))
                for (Dim d : kAllDims) {
                    if (d == Dim::IN) continue;
                    const auto key = std::string(dim_code(d));
                    if (obj.at("flags").contains(key))
                        rec.flags[static_cast<size_t>(d)] =
                            static_cast<int8_t>(obj.at("flags").at(key).get<int>());
                }
            if (obj.contains("ru_text")) rec.ru_free_text = obj.at("ru_text").get<std::string>();
            rec.submitted_at = obj.value("submitted_at", static_cast<int64_t>(0));
            if (!batch_of_.count(rec.argument_id)) continue;
            revision_count_[rec.annotator_id + '\x1f' + rec.argument_id]++;
            apply_record_locked(rec);
        }
        log_ = std::make_unique<DurableLog>(dir_ / "records.jsonl");
    }

    void index_batches() {
        for (size_t b = 0; b < batches_.size(); ++b)
            for (const auto& id : batches_[b]) batch_of_[id] = b;
    }

    // First batch with an unanswered item (== batches_.size() when done).
    size_t current_batch_locked(const AnnotatorState& state) const {
        for (size_t b = 0; b < batches_.size(); ++b)
            if (state.answered_in(b, batches_[b]) < batches_[b].size()) return b;
        return batches_.size();
    }

    int64_t pacing_unblock_locked(const AnnotatorState& state) const {
        int64_t latest = 0;
        for (const auto& [batch, at] : state.completed_at) latest = std::max(latest, at);
        return latest ? latest + cfg_.pacing_window_seconds : 0;
    }

    NextItem next_item_locked(const std::string& annotator) const {
        NextItem out{};
        out.items_total = batch_of_.size();
        const auto it = annotator_state_.find(annotator);
        static const AnnotatorState empty_state;
        const AnnotatorState& state = it == annotator_state_.end() ? empty_state : it->second;
        out.items_done = state.records.size();
        const size_t current = current_batch_locked(state);
        if (current == batches_.size()) {
            out.status = NextItem::Status::done;
            return out;
        }
        const size_t answered = state.answered_in(current, batches_[current]);
        if (answered == 0) {
            const int64_t unblock = pacing_unblock_locked(state);
            if (unblock > clock_()) {
                out.status = NextItem::Status::pacing_blocked;
                out.unblock_at = unblock;
                return out;
            }
        }
        for (const auto& id : batches_[current]) {
            if (state.records.count(id)) continue;
            out.status = NextItem::Status::item;
            out.argument_id = id;
            out.batch_index = current;
            out.position = answered;
            out.batch_total = batches_[current].size();
            return out;
        }
        out.status = NextItem::Status::done;  // unreachable; current batch had a gap
        return out;
    }

    void apply_record_locked(const AnnotationRecord& rec) {
        auto& state = annotator_state_[rec.annotator_id];
        const bool fresh = !state.records.count(rec.argument_id);
        state.records[rec.argument_id] = rec;
        if (!fresh) return;
        const size_t batch = batch_of_.at(rec.argument_id);
        if (state.answered_in(batch, batches_[batch]) == batches_[batch].size() &&
            !state.completed_at.count(batch))
            state.completed_at[batch] = rec.submitted_at;
    }

    std::filesystem::path dir_;
    CampaignConfig cfg_;
    std::vector<std::vector<std::string>> batches_;
    Clock clock_;
    std::map<std::string, size_t> batch_of_;
    std::map<std::string, AnnotatorState> annotator_state_;
    std::map<std::string, int> revision_count_;
    std::unique_ptr<DurableLog> log_;
    mutable std::mutex mu_;
};

// HTTP layer. One service owns the corpus snapshot and the campaigns
// under <data_dir>/campaigns/.
class CampaignService {
public:
    CampaignService(std::filesystem::path data_dir, CorpusStore corpus, std::string admin_token,
                    Clock clock = system_clock_seconds)
        : data_dir_(std::move(data_dir)), corpus_(std::move(corpus)), admin_token_(std::move(admin_token)),
          clock_(std::move(clock)) {
        const auto root = data_dir_ / "campaigns";
        if (std::filesystem::exists(root))
            for (const auto& entry : std::filesystem::directory_iterator(root))
                if (entry.is_directory() && std::filesystem::exists(entry.path() / "campaign.json")) {
                    auto campaign = Campaign::load(entry.path(), clock_);
                    campaigns_[campaign->config().campaign_id] = std::move(campaign);
                }
    }

    const CorpusStore& corpus() const { return corpus_; }

    Campaign* find(const std::string& id) {
        const auto it = campaigns_.find(id);
        return it == campaigns_.end() ? nullptr : it->second.get();
    }

    Campaign& create(CampaignConfig cfg) {
        if (cfg.campaign_id.empty()) throw std::invalid_argument("campaign_id required");
        if (campaigns_.count(cfg.campaign_id)) throw std::invalid_argument("campaign exists");
        if (cfg.roster.empty()) throw std::invalid_argument("roster required");
        std::vector<std::string> ids;
        ids.reserve(corpus_.arguments().size());
        for (const auto& a : corpus_.arguments()) ids.push_back(a.argument_id);
        std::sort(ids.begin(), ids.end());
        auto batches = plan_batches(std::move(ids), cfg.batch_size, cfg.seed);
        const auto dir = data_dir_ / "campaigns" / cfg.campaign_id;
        const std::string id = cfg.campaign_id;
        campaigns_[id] = std::make_unique<Campaign>(dir, std::move(cfg), std::move(batches), clock_);
        return *campaigns_[id];
    }

    void register_routes(httplib::Server& server) {
        server.Post("/campaigns", [this](const httplib::Request& req, httplib::Response& res) {
            if (bearer(req) != admin_token_) return fail(res, 401, "bad admin token");
            json body = json::parse(req.body, nullptr, false);
            if (body.is_discarded()) return fail(res, 400, "bad json");
            CampaignConfig cfg;
            try {
                cfg.campaign_id = body.at("campaign_id").get<std::string>();
                cfg.batch_size = body.value("batch_size", static_cast<size_t>(150));
                cfg.seed = body.value("seed", static_cast<uint64_t>(0));
                cfg.pacing_window_seconds = body.value("pacing_window_seconds", static_cast<int64_t>(86400));
                for (const auto& r : body.at("roster"))
                    cfg.roster.push_back(
                        {r.at("annotator_id").get<std::string>(), r.at("token").get<std::string>()});
                std::lock_guard<std::mutex> hold(mu_);
                Campaign& c = create(std::move(cfg));
                json out = {{"campaign_id", c.config().campaign_id},
                            {"batches", c.batches().size()},
                            {"items", corpus_.arguments().size()}};
                res.set_content(out.dump(), "application/json");
            } catch (const std::exception& e) {
                return fail(res, 400, e.what());
            }
        });

        server.Get(R"(/campaigns/([^/]+)/next)", [this](const httplib::Request& req, httplib::Response& res) {
            Campaign* campaign = authed_campaign(req, res);
            if (!campaign) return;
            const std::string annotator = req.get_param_value("annotator");
            const NextItem item = campaign->next_item(annotator);
            json out;
            switch (item.status) {
                case NextItem::Status::done: out = {{"status", "done"}, {"items_done", item.items_done}}; break;
                case NextItem::Status::pacing_blocked:
                    out = {{"status", "pacing-blocked"}, {"unblock_at", item.unblock_at}};
                    break;
                case NextItem::Status::item: {
                    const Argument* arg = corpus_.find_argument(item.argument_id);
                    out = {{"status", "item"},
                           {"argument_id", item.argument_id},
                           {"issue", arg ? arg->issue : ""},
                           {"text", arg ? arg->text : ""},
                           {"batch_index", item.batch_index},
                           {"position", item.position},
                           {"batch_total", item.batch_total},
                           {"items_done", item.items_done},
                           {"items_total", item.items_total}};
                    break;
                }
            }
            res.set_content(out.dump(), "application/json");
        });

        server.Post(R"(/campaigns/([^/]+)/submit)", [this](const httplib::Request& req, httplib::Response& res) {
            Campaign* campaign = authed_campaign(req, res, /*annotator_from_body=*/true);
            if (!campaign) return;
            json body = json::parse(req.body, nullptr, false);
            if (body.is_discarded()) return fail(res, 400, "bad json");
            AnnotationRecord rec;
            rec.argument_id = body.value("argument_id", std::string());
            rec.in_rating = body.value("IN", 0);
            if (body.contains("flags") && body.at("flags").is_object())
                for (Dim d : kAllDims) {
                    if (d == Dim::IN) continue;
                    const auto key = std::string(dim_code(d));
                    if (body.at("flags").contains(key)) {
                        const int v = body.at("flags").at(key).get<int>();
                        if (v == 0 || v == 1) rec.flags[static_cast<size_t>(d)] = static_cast<int8_t>(v);
                    }
                }
            if (body.contains("ru_text") && body.at("ru_text").is_string() &&
                !body.at("ru_text").get<std::string>().empty())
                rec.ru_free_text = body.at("ru_text").get<std::string>();
            const std::string annotator = body.value("annotator_id", std::string());
            const SubmitOutcome outcome = campaign->submit(annotator, std::move(rec));
            json out;
            if (outcome.accepted) {
                out = {{"status", "accepted"}, {"revision", outcome.revision}};
            } else if (!outcome.violations.empty()) {
                out = {{"status", "rejected"}, {"violations", outcome.violations}};
                res.status = 422;
            } else {
                out = {{"status", "error"}, {"error", outcome.error}};
                res.status = 409;
            }
            res.set_content(out.dump(), "application/json");
        });

        server.Get(R"(/campaigns/([^/]+)/progress)", [this](const httplib::Request& req, httplib::Response& res) {
            Campaign* campaign = authed_campaign(req, res);
            if (!campaign) return;
            res.set_content(campaign->progress().dump(), "application/json");
        });

        server.Get(R"(/campaigns/([^/]+)/export/([a-z-]+))",
                   [this](const httplib::Request& req, httplib::Response& res) {
                       Campaign* campaign = authed_campaign(req, res);
                       if (!campaign) return;
                       const std::string kind = req.matches[2];
                       const auto records = campaign->latest_records();
                       std::ostringstream out;
                       try {
                           if (kind == "annotations") {
                               CorpusStore tmp;
                               std::ostringstream args;
                               corpus_.export_arguments(args, Format::tsv);
                               std::istringstream args_in(args.str());
                               tmp.ingest_arguments(args_in, Format::tsv);
                               IngestReport r;
                               size_t line = 0;
                               for (const auto& rec : records)
                                   tmp.ingest_one_annotation(rec, ++line, ValidationMode::strict,
                                                             DupPolicy::error, r);
                               tmp.export_annotations(out, Format::tsv);
                               res.set_content(out.str(), "text/tab-separated-values");
                           } else if (kind == "conservative-gold") {
                               write_label_matrix(out, aggregate_strategy(records, Strategy::conservative));
                               res.set_content(out.str(), "text/tab-separated-values");
                           } else if (kind == "agreement") {
                               res.set_content(render_table(build_table1b(records), ReportFormat::csv), "text/csv");
                           } else if (kind == "correlations") {
                               res.set_content(render_table(build_table1c(records), ReportFormat::csv), "text/csv");
                           } else {
                               return fail(res, 404, "unknown export kind: " + kind);
                           }
                       } catch (const std::exception& e) {
                           return fail(res, 409, e.what());
                       }
                   });
    }

private:
    static std::string bearer(const httplib::Request& req) {
        const auto auth = req.get_header_value("Authorization");
        const std::string prefix = "Bearer ";
        if (auth.rfind(prefix, 0) == 0) return auth.substr(prefix.size());
        return {};
    }

    static void fail(httplib::Response& res, int status, const std::string& message) {
        res.status = status;
        res.set_content(json{{"status", "error"}, {"error", message}}.dump(), "application/json");
    }

    // Campaign lookup + token check. Annotator endpoints accept the
    // annotator's roster token (or the admin token); exports require admin.
    Campaign* authed_campaign(const httplib::Request& req, httplib::Response& res,
                              bool annotator_from_body = false) {
        std::lock_guard<std::mutex> hold(mu_);
        const std::string id = req.matches[1];
        Campaign* campaign = find(id);
        if (!campaign) {
            fail(res, 404, "unknown campaign: " + id);
            return nullptr;
        }
        const std::string token = bearer(req);
        if (token == admin_token_) return campaign;
        std::string annotator;
        if (annotator_from_body) {
            json body = json::parse(req.body, nullptr, false);
            if (!body.is_discarded()) annotator = body.value("annotator_id", std::string());
        } else {
            annotator = req.get_param_value("annotator");
        }
        const RosterEntry* entry = campaign->roster_entry(annotator);
        if (!entry) {
            fail(res, 404, "unknown annotator: " + annotator);
            return nullptr;
        }
        if (entry->token != token) {
            fail(res, 401, "bad token");
            return nullptr;
        }
        return campaign;
    }

    std::filesystem::path data_dir_;
    CorpusStore corpus_;
    std::string admin_token_;
    Clock clock_;
    std::map<std::string, std::unique_ptr<Campaign>> campaigns_;
    std::mutex mu_;
};

}  // namespace inapt
