#pragma once
// Line-oriented file helpers shared by ingest and export.
//
// TSV cells escape backslash, tab, CR and LF (\\ \t \r \n) so arbitrary
// argument text survives a round trip; CSV input (import adapter) follows
// RFC 4180 quoting. Exports always write the TSV form.

#include <charconv>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace inapt {

inline std::string tsv_escape(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '\t': out += "\\t"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            default: out += c;
        }
    }
    return out;
}

inline std::string tsv_unescape(std::string_view cell) {
    std::string out;
    out.reserve(cell.size());
    for (size_t i = 0; i < cell.size(); ++i) {
        if (cell[i] != '\\' || i + 1 == cell.size()) {
            out += cell[i];
            continue;
        }
        switch (cell[++i]) {
            case '\\': out += '\\'; break;
            case 't': out += '\t'; break;
            case 'n': out += '\n'; break;
            case 'r': out += '\r'; break;
            default: out += '\\'; out += cell[i];
        }
    }
    return out;
}

inline std::vector<std::string> split_tsv(std::string_view line) {
    std::vector<std::string> cells;
    size_t start = 0;
    for (size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == '\t') {
            cells.push_back(tsv_unescape(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    return cells;
}

inline std::string join_tsv(const std::vector<std::string>& cells) {
    std::string line;
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) line += '\t';
        line += tsv_escape(cells[i]);
    }
    return line;
}

// getline that tolerates trailing \r from CRLF input.
inline bool read_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

inline std::optional<long long> parse_int(std::string_view s) {
    long long v = 0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) return std::nullopt;
    return v;
}

inline std::optional<double> parse_double(std::string_view s) {
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
    return v;
}

// RFC 4180-ish reader: quoted cells may contain the delimiter and newlines.
class CsvReader {
public:
    explicit CsvReader(std::istream& in, char delim = ',') : in_(in), delim_(delim) {}

    // Returns false on clean EOF; throws on unterminated quotes.
    bool next(std::vector<std::string>& row) {
        row.clear();
        ++line_;
        std::string line;
        if (!read_line(in_, line)) return false;
        std::string cell;
        bool quoted = false;
        size_t i = 0;
        while (true) {
            if (i == line.size()) {
                if (!quoted) break;
                if (!read_line(in_, line)) throw std::runtime_error("csv: unterminated quote at line " + std::to_string(line_));
                ++line_;
                cell += '\n';
                i = 0;
                continue;
            }
            const char c = line[i];
            if (quoted) {
                if (c == '"') {
                    if (i + 1 < line.size() && line[i + 1] == '"') { cell += '"'; i += 2; continue; }
                    quoted = false;
                    ++i;
                } else {
                    cell += c;
                    ++i;
                }
            } else if (c == '"' && cell.empty()) {
                quoted = true;
                ++i;
            } else if (c == delim_) {
                row.push_back(std::move(cell));
                cell.clear();
                ++i;
            } else {
                cell += c;
                ++i;
            }
        }
        row.push_back(std::move(cell));
        return true;
    }

    size_t line() const { return line_; }

private:
    std::istream& in_;
    char delim_;
    size_t line_ = 0;
};

}  // namespace inapt
