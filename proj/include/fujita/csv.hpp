/// CSV emission and a small schema-checking reader. All floating-point cells
/// print with 17 significant digits so identical configs produce bit-identical
/// files.
#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fujita/grid.hpp"

namespace fujita {
namespace csv {

inline std::string cell(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string cell(std::uint64_t v) { return std::to_string(v); }
inline std::string cell(long v) { return std::to_string(v); }
inline std::string cell(const std::string& v) { return v; }
inline std::string cell(const char* v) { return v; }

class Writer {
public:
    explicit Writer(std::ostream& os) : os_(os) {}

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os_ << ',';
            os_ << cells[i];
        }
        os_ << '\n';
    }

private:
    std::ostream& os_;
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

inline Table read(std::istream& is) {
    Table t;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string tok;
        std::istringstream ls(line);
        while (std::getline(ls, tok, ',')) cells.push_back(tok);
        if (line.back() == ',') cells.emplace_back();
        if (first) {
            t.header = cells;
            first = false;
        } else {
            t.rows.push_back(cells);
        }
    }
    return t;
}

inline Table read_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open CSV: " + path);
    return read(is);
}

/// Validates header names and rectangular shape; the schema check used by the
/// round-trip tests.
inline void check_schema(const Table& t, const std::vector<std::string>& expected_header) {
    if (t.header != expected_header) {
        std::string got;
        for (const auto& h : t.header) got += h + ",";
        throw std::runtime_error("CSV schema mismatch; header is: " + got);
    }
    for (const auto& row : t.rows)
        if (row.size() != expected_header.size())
            throw std::runtime_error("CSV schema mismatch: ragged row");
}

}  // namespace csv

inline void GridFunction::write_csv(std::ostream& os) const {
    csv::Writer w(os);
    w.row({"t", "r", "value"});
    for (std::size_t k = 0; k < n_time(); ++k)
        for (int i = 0; i < n_r(); ++i)
            w.row({csv::cell(t[k]), csv::cell(grid->r[static_cast<std::size_t>(i)]),
                   csv::cell((*this)(k, i))});
}

}  // namespace fujita
