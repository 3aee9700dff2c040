#pragma once
// Import adapter: maps a third-party wide-format CSV dump (one row per
// argument, per-annotator label columns) onto the canonical store. The
// released corpus ships in a layout the workbench does not dictate, so
// the column names, annotator tags and value encodings come from a JSON
// mapping file; `AdapterMapping{}` holds a workable default.
//
// Expected shape, with the default template "{dim}_{annotator}":
//   post_id,issue,post_text,source,IN_1,TE_1,...,RU_1,IN_2,...,RU_3
// IN cells map to 1..3, binary cells to 0/1 via the value maps.

#include <istream>
#include <map>
#include <string>
#include <vector>

#include "inapt/corpus.hpp"
#include "inapt/tsv.hpp"

namespace inapt {

struct AdapterMapping {
    char delimiter = ',';
    std::string argument_id_col = "post_id";
    std::string issue_col = "issue";
    std::string text_col = "post_text";
    std::string source_col = "source";
    std::map<std::string, std::string> source_map;  // raw cell -> canonical source tag
    std::vector<std::string> annotators = {"1", "2", "3"};
    std::string column_template = "{dim}_{annotator}";
    std::string ru_text_template;  // optional, e.g. "ru_text_{annotator}"
    std::string batch_col;         // optional
    std::map<std::string, int> in_values = {{"1", 1}, {"2", 2}, {"3", 3}};
    std::map<std::string, int> binary_values = {{"0", 0}, {"1", 1}, {"no", 0}, {"yes", 1}};

    static AdapterMapping from_json(const json& j) {
        AdapterMapping m;
        if (j.contains("delimiter")) {
            const auto d = j.at("delimiter").get<std::string>();
            if (d.size() != 1) throw std::runtime_error("adapter: delimiter must be one character");
            m.delimiter = d[0];
        }
        if (j.contains("argument_id")) m.argument_id_col = j.at("argument_id").get<std::string>();
        if (j.contains("issue")) m.issue_col = j.at("issue").get<std::string>();
        if (j.contains("text")) m.text_col = j.at("text").get<std::string>();
        if (j.contains("source")) m.source_col = j.at("source").get<std::string>();
        if (j.contains("source_map"))
            for (const auto& [k, v] : j.at("source_map").items()) m.source_map[k] = v.get<std::string>();
        if (j.contains("annotators")) {
            m.annotators.clear();
            for (const auto& a : j.at("annotators")) m.annotators.push_back(a.get<std::string>());
        }
        if (j.contains("column_template")) m.column_template = j.at("column_template").get<std::string>();
        if (j.contains("ru_text_template")) m.ru_text_template = j.at("ru_text_template").get<std::string>();
        if (j.contains("batch")) m.batch_col = j.at("batch").get<std::string>();
        if (j.contains("in_values")) {
            m.in_values.clear();
            for (const auto& [k, v] : j.at("in_values").items()) m.in_values[k] = v.get<int>();
        }
        if (j.contains("binary_values")) {
            m.binary_values.clear();
            for (const auto& [k, v] : j.at("binary_values").items()) m.binary_values[k] = v.get<int>();
        }
        return m;
    }

    std::string column_for(Dim d, const std::string& annotator) const {
        return expand(column_template, d, annotator);
    }

    std::string ru_text_col(const std::string& annotator) const {
        return ru_text_template.empty() ? std::string() : expand(ru_text_template, Dim::RU, annotator);
    }

private:
    static std::string expand(const std::string& tmpl, Dim d, const std::string& annotator) {
        std::string out = tmpl;
        auto replace = [&](const std::string& key, const std::string& value) {
            const auto pos = out.find(key);
            if (pos != std::string::npos) out.replace(pos, key.size(), value);
        };
        replace("{dim}", std::string(dim_code(d)));
        replace("{annotator}", annotator);
        return out;
    }
};

struct AdapterResult {
    IngestReport arguments;
    IngestReport annotations;
};

inline AdapterResult import_wide_csv(std::istream& in, const AdapterMapping& mapping, CorpusStore& store,
                                     ValidationMode mode) {
    AdapterResult result;
    CsvReader reader(in, mapping.delimiter);
    std::vector<std::string> header;
    if (!reader.next(header)) return result;  // empty input

    std::map<std::string, size_t> col;
    for (size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
    auto need = [&](const std::string& name) {
        const auto it = col.find(name);
        if (it == col.end()) throw std::runtime_error("adapter: missing column: " + name);
        return it->second;
    };
    const size_t id_col = need(mapping.argument_id_col);
    const size_t issue_col = need(mapping.issue_col);
    const size_t text_col = need(mapping.text_col);
    const size_t source_col = need(mapping.source_col);
    struct AnnCols {
        std::array<size_t, kDimCount> dim;
        size_t ru_text = SIZE_MAX;
    };
    std::vector<AnnCols> ann_cols;
    for (const auto& annotator : mapping.annotators) {
        AnnCols cols{};
        for (Dim d : kAllDims) cols.dim[static_cast<size_t>(d)] = need(mapping.column_for(d, annotator));
        const auto ru = mapping.ru_text_col(annotator);
        if (!ru.empty() && col.count(ru)) cols.ru_text = col[ru];
        ann_cols.push_back(cols);
    }
    const size_t batch_col = mapping.batch_col.empty() ? SIZE_MAX : need(mapping.batch_col);

    std::vector<std::string> row;
    while (reader.next(row)) {
        const size_t line = reader.line();
        if (row.size() < header.size()) {
            result.arguments.errors.push_back({line, "short row"});
            continue;
        }
        Argument arg;
        arg.argument_id = row[id_col];
        arg.issue = row[issue_col];
        arg.text = row[text_col];
        std::string raw_source = row[source_col];
        const auto mapped = mapping.source_map.find(raw_source);
        if (mapped != mapping.source_map.end()) raw_source = mapped->second;
        const auto source = source_from_name(raw_source);
        if (!source) {
            result.arguments.errors.push_back({line, "unknown source tag: " + row[source_col]});
            continue;
        }
        arg.source = *source;

        // route through the canonical ingest path so all checks apply
        std::istringstream one(join_tsv({"argument_id", "source", "issue", "text"}) + '\n' +
                               join_tsv({arg.argument_id, std::string(source_name(arg.source)), arg.issue,
                                         arg.text}) +
                               '\n');
        IngestReport r = store.ingest_arguments(one, Format::tsv);
        for (auto& e : r.errors) result.arguments.errors.push_back({line, e.message});
        for (auto& w : r.warnings) result.arguments.warnings.push_back({line, w.message});
        result.arguments.ingested += r.ingested;
        result.arguments.skipped += r.skipped;
        if (r.ingested == 0 && r.skipped == 0) continue;

        for (size_t a = 0; a < mapping.annotators.size(); ++a) {
            AnnotationRecord rec;
            rec.argument_id = arg.argument_id;
            rec.annotator_id = mapping.annotators[a];
            rec.batch_id = batch_col == SIZE_MAX ? "" : row[batch_col];
            const auto in_raw = row[ann_cols[a].dim[0]];
            const auto in_it = mapping.in_values.find(in_raw);
            if (in_it == mapping.in_values.end()) {
                result.annotations.errors.push_back({line, "bad IN value '" + in_raw + "'"});
                continue;
            }
            rec.in_rating = in_it->second;
            bool ok = true;
            for (Dim d : kAllDims) {
                if (d == Dim::IN) continue;
                const auto raw = row[ann_cols[a].dim[static_cast<size_t>(d)]];
                const auto it = mapping.binary_values.find(raw);
                if (it == mapping.binary_values.end()) {
                    result.annotations.errors.push_back(
                        {line, "bad " + std::string(dim_code(d)) + " value '" + raw + "'"});
                    ok = false;
                    break;
                }
                rec.flags[static_cast<size_t>(d)] = static_cast<int8_t>(it->second ? 1 : 0);
            }
            if (!ok) continue;
            if (ann_cols[a].ru_text != SIZE_MAX && !row[ann_cols[a].ru_text].empty())
                rec.ru_free_text = row[ann_cols[a].ru_text];
            store.ingest_one_annotation(std::move(rec), line, mode, DupPolicy::skip, result.annotations);
        }
    }
    return result;
}

}  // namespace inapt
