#ifndef MSIMAP_IO_HPP
#define MSIMAP_IO_HPP

#include "msimap/common.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace msimap {

struct CsvTable {
    Matrix values;                     // numeric cells, labels excluded
    std::vector<int> labels;           // empty unless a label column was requested
    std::string header_comment;        // first '#' line, without the marker
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, sep)) out.push_back(trim(cell));
    if (!line.empty() && line.back() == sep) out.push_back("");
    return out;
}

inline double parse_double(const std::string& s, const std::string& context) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw ParseError("trailing characters");
        return v;
    } catch (const ParseError&) {
        throw ParseError("bad numeric value '" + s + "' in " + context);
    } catch (const std::exception&) {
        throw ParseError("bad numeric value '" + s + "' in " + context);
    }
}

}  // namespace detail

/// Reads a CSV of real values: one sample per row, optional header row,
/// optional integer label column (0-based; excluded from the features).
/// Leading '#' lines are collected as the header comment.
inline CsvTable read_csv(const std::string& path, bool has_header = false,
                         std::optional<int> label_column = std::nullopt) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open input file: " + path);

    CsvTable table;
    std::vector<std::vector<double>> rows;
    std::string line;
    bool header_pending = has_header;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const std::string t = detail::trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            if (rows.empty() && table.header_comment.empty()) {
                table.header_comment = detail::trim(t.substr(1));
            }
            continue;
        }
        if (header_pending) {
            header_pending = false;
            continue;
        }
        const auto cells = detail::split(t, ',');
        if (label_column && (*label_column < 0 || *label_column >= static_cast<int>(cells.size()))) {
            throw ParseError("label column out of range on line " + std::to_string(line_no));
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const double v = detail::parse_double(cells[c], "line " + std::to_string(line_no));
            if (label_column && static_cast<int>(c) == *label_column) {
                table.labels.push_back(static_cast<int>(v));
            } else {
                row.push_back(v);
            }
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError("inconsistent column count on line " + std::to_string(line_no));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("no data rows in " + path);

    table.values.resize(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) table.values(r, c) = rows[r][c];
    }
    return table;
}

/// Writes a matrix row-wise; an optional '#'-prefixed header goes first.
inline void write_csv(const std::string& path, const Matrix& values,
                      const std::string& header_comment = {},
                      const std::vector<int>* trailing_labels = nullptr) {
    std::ofstream os(path);
    if (!os) throw ParseError("cannot open output file: " + path);
    if (trailing_labels && static_cast<Eigen::Index>(trailing_labels->size()) != values.rows()) {
        throw ParameterError("label count must match row count");
    }
    if (!header_comment.empty()) os << "# " << header_comment << "\n";
    os.precision(17);
    for (Eigen::Index r = 0; r < values.rows(); ++r) {
        for (Eigen::Index c = 0; c < values.cols(); ++c) {
            if (c) os << ",";
            os << values(r, c);
        }
        if (trailing_labels) os << "," << (*trailing_labels)[r];
        os << "\n";
    }
    if (!os) throw ParseError("write failed: " + path);
}

/// Flat key=value settings: one pair per line, '#' comments, later lines
/// win. Also parses comma-separated provenance headers.
inline std::map<std::string, std::string> parse_key_values(const std::string& text,
                                                           char pair_sep = '\n') {
    std::map<std::string, std::string> out;
    for (const std::string& item : detail::split(text, pair_sep)) {
        const std::string t = detail::trim(item);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value, got '" + t + "'");
        const std::string key = detail::trim(t.substr(0, eq));
        if (key.empty()) throw ParseError("empty key in '" + t + "'");
        out[key] = detail::trim(t.substr(eq + 1));
    }
    return out;
}

inline std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_key_values(ss.str());
}

}  // namespace msimap

#endif
