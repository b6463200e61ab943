#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "phids/errors.hpp"

namespace phids {

enum class Label { Normal, Intrusion };

inline std::string to_string(Label l) { return l == Label::Intrusion ? "intrusion" : "normal"; }

inline std::optional<Label> parse_label(std::string text) {
    std::transform(text.begin(), text.end(), text.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (text == "intrusion") return Label::Intrusion;
    if (text == "normal") return Label::Normal;
    return std::nullopt;
}

/// One raw field: original text plus the numeric reading when it has one.
struct FieldValue {
    std::string text;
    std::optional<double> number;
};

inline FieldValue make_field(std::string text) {
    FieldValue f{std::move(text), std::nullopt};
    const char* begin = f.text.data();
    const char* end = begin + f.text.size();
    double value = 0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec == std::errc() && ptr == end && !f.text.empty()) f.number = value;
    return f;
}

struct FeatureRecord {
    std::vector<FieldValue> fields;
    std::optional<Label> label;
};

struct Dataset {
    std::vector<FeatureRecord> records;
    bool labeled = false;
    std::size_t feature_count = 0;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    for (std::string& s : out) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    }
    return out;
}

inline const std::set<std::string>& known_header_names() {
    static const std::set<std::string> names = {"duration", "feature",  "feature_0", "feature_1",
                                                "f0",       "f1",       "id",        "name",
                                                "col0",     "col1",     "label"};
    return names;
}

inline bool looks_like_header(const std::vector<std::string>& fields) {
    if (fields.empty()) return false;
    std::string first = fields.front();
    std::transform(first.begin(), first.end(), first.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (make_field(fields.front()).number) return false;
    if (known_header_names().count(first)) return true;
    // all-text row whose last column is not a label reads as a header
    for (const std::string& f : fields)
        if (make_field(f).number) return false;
    return !parse_label(fields.back());
}

}  // namespace detail

/// Comma-separated records, feature columns plus an optional trailing label
/// column ("intrusion"/"normal"). The file is labeled when every row ends
/// with a label. Rows must agree on the column count.
inline Dataset load_dataset(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::size_t> row_lines;
    bool first_content = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line.front() == '#') continue;
        auto fields = detail::split_csv_line(line);
        if (fields.size() == 1 && fields.front().empty()) continue;
        if (first_content && detail::looks_like_header(fields)) {
            first_content = false;
            continue;
        }
        first_content = false;
        rows.push_back(std::move(fields));
        row_lines.push_back(lineno);
    }
    if (rows.empty()) throw empty_input("dataset has no records");

    const std::size_t width = rows.front().size();
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i].size() != width)
            throw parse_error(row_lines[i], "record has " + std::to_string(rows[i].size()) +
                                                " columns, expected " + std::to_string(width));

    bool labeled = true;
    for (const auto& row : rows)
        if (!parse_label(row.back())) labeled = false;

    Dataset ds;
    ds.labeled = labeled;
    ds.feature_count = labeled ? width - 1 : width;
    if (ds.feature_count == 0) throw empty_input("dataset has no feature columns");
    for (const auto& row : rows) {
        FeatureRecord rec;
        for (std::size_t i = 0; i < ds.feature_count; ++i)
            rec.fields.push_back(make_field(row[i]));
        if (labeled) rec.label = parse_label(row.back());
        ds.records.push_back(std::move(rec));
    }
    return ds;
}

inline void write_dataset(std::ostream& out, const std::vector<FeatureRecord>& records) {
    for (const FeatureRecord& rec : records) {
        for (std::size_t i = 0; i < rec.fields.size(); ++i) {
            if (i) out << ',';
            out << rec.fields[i].text;
        }
        if (rec.label) out << ',' << to_string(*rec.label);
        out << '\n';
    }
}

}  // namespace phids
