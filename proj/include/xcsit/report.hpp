#pragma once

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace xcsit {

// Shortest round-trip decimal form, locale independent. All numeric report
// fields funnel through here so identical runs emit identical bytes.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string format_int(long long v) { return std::to_string(v); }

// Minimal CSV document: leading '#' comment lines, one header row, data
// rows. Fields containing commas or quotes (pattern strings do) are quoted
// RFC style; emit(parse(emit(x))) == emit(x) by construction.
struct CsvDoc {
    std::vector<std::string> comments;  // without the leading "# "
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    friend bool operator==(const CsvDoc&, const CsvDoc&) = default;
};

namespace detail {

inline void append_csv_field(std::string& out, const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) {
        out += field;
        return;
    }
    out += '"';
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
}

inline std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    fields.back() += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            if (!fields.back().empty())
                throw std::invalid_argument("csv: stray quote on line " + std::to_string(line_no));
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else {
            fields.back() += c;
        }
    }
    if (quoted)
        throw std::invalid_argument("csv: unterminated quote on line " + std::to_string(line_no));
    return fields;
}

}  // namespace detail

inline std::string emit_csv(const CsvDoc& doc) {
    std::string out;
    for (const std::string& c : doc.comments) {
        out += "# ";
        out += c;
        out += '\n';
    }
    const auto emit_row = [&out](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            detail::append_csv_field(out, row[i]);
        }
        out += '\n';
    };
    emit_row(doc.columns);
    for (const auto& row : doc.rows) emit_row(row);
    return out;
}

inline CsvDoc parse_csv(std::string_view text) {
    CsvDoc doc;
    std::size_t pos = 0, line_no = 0;
    bool header_seen = false;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (line.empty()) continue;
        if (line.starts_with("#")) {
            std::string_view body = line.substr(1);
            if (body.starts_with(" ")) body = body.substr(1);
            doc.comments.emplace_back(body);
            continue;
        }
        auto fields = detail::split_csv_line(line, line_no);
        if (!header_seen) {
            doc.columns = std::move(fields);
            header_seen = true;
        } else {
            if (fields.size() != doc.columns.size())
                throw std::invalid_argument("csv: line " + std::to_string(line_no) + " has " +
                                            std::to_string(fields.size()) + " fields, expected " +
                                            std::to_string(doc.columns.size()));
            doc.rows.push_back(std::move(fields));
        }
    }
    if (!header_seen) throw std::invalid_argument("csv: missing header row");
    return doc;
}

}  // namespace xcsit
