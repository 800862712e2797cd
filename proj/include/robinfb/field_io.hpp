#pragma once

// CSV dumps. CellSet: header "# cells n1 n2 h", then n2 rows of n1 0/1
// values. ScalarField: header "# nodes n1+1 n2+1 h", then n2+1 rows of node
// values with 17 significant digits so doubles round-trip exactly.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "robinfb/grid.hpp"

namespace robinfb {

inline std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace detail {

struct CsvHeader {
    std::string kind;
    int width = 0;
    int height = 0;
    double h = 0.0;
};

inline CsvHeader read_header(std::istream& in, const std::string& kind) {
    std::string line;
    if (!std::getline(in, line)) throw InvalidField("empty " + kind + " file");
    std::istringstream ls(line);
    std::string hash;
    CsvHeader hd;
    if (!(ls >> hash >> hd.kind >> hd.width >> hd.height >> hd.h) || hash != "#" || hd.kind != kind)
        throw InvalidField("malformed header, expected \"# " + kind + " ...\"");
    return hd;
}

inline std::vector<double> read_rows(std::istream& in, int width, int height) {
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(width) * height);
    std::string line;
    int row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        int col = 0;
        while (std::getline(ls, cell, ',')) {
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str()) throw InvalidField("row " + std::to_string(row + 1) + ": bad number");
            values.push_back(v);
            ++col;
        }
        if (col != width) throw DimensionMismatch("row " + std::to_string(row + 1) + ": wrong column count");
        ++row;
    }
    if (row != height) throw DimensionMismatch("wrong number of rows");
    return values;
}

inline void check_grid(const CsvHeader& hd, int width, int height, const Grid& g) {
    if (hd.width != width || hd.height != height) throw DimensionMismatch("file size does not match grid");
    if (std::abs(hd.h - g.h()) > 1e-12 * g.h()) throw DimensionMismatch("file spacing does not match grid");
}

} // namespace detail

inline void write_cells(std::ostream& out, const CellSet& s, const Grid& g) {
    require_match(g, s, "write_cells");
    out << "# cells " << g.n1() << ' ' << g.n2() << ' ' << format_double(g.h()) << '\n';
    for (int j = 0; j < g.n2(); ++j) {
        for (int i = 0; i < g.n1(); ++i) out << (i ? "," : "") << (s[g.cell(i, j)] ? 1 : 0);
        out << '\n';
    }
}

inline CellSet read_cells(std::istream& in, const Grid& g) {
    const auto hd = detail::read_header(in, "cells");
    detail::check_grid(hd, g.n1(), g.n2(), g);
    const auto v = detail::read_rows(in, hd.width, hd.height);
    CellSet s(g);
    for (std::size_t c = 0; c < v.size(); ++c) {
        if (v[c] != 0.0 && v[c] != 1.0) throw InvalidField("cell values must be 0 or 1");
        s.set(c, v[c] == 1.0);
    }
    return s;
}

inline void write_nodes(std::ostream& out, const ScalarField& u, const Grid& g) {
    require_match(g, u, "write_nodes");
    out << "# nodes " << g.n1() + 1 << ' ' << g.n2() + 1 << ' ' << format_double(g.h()) << '\n';
    for (int j = 0; j <= g.n2(); ++j) {
        for (int i = 0; i <= g.n1(); ++i) out << (i ? "," : "") << format_double(u[j * (g.n1() + 1) + i]);
        out << '\n';
    }
}

inline ScalarField read_nodes(std::istream& in, const Grid& g) {
    const auto hd = detail::read_header(in, "nodes");
    detail::check_grid(hd, g.n1() + 1, g.n2() + 1, g);
    ScalarField u(g);
    u.values() = detail::read_rows(in, hd.width, hd.height);
    return u;
}

/// Domain mask for custom runs: "# mask n1 n2 h", values 2 = in D,
/// 1 = outside D and in E, 0 = outside D and not in E.
inline DomainMask read_mask(std::istream& in, const Grid& g) {
    const auto hd = detail::read_header(in, "mask");
    detail::check_grid(hd, g.n1(), g.n2(), g);
    const auto v = detail::read_rows(in, hd.width, hd.height);
    DomainMask m;
    m.in_D.resize(v.size());
    m.in_E.resize(v.size());
    for (std::size_t c = 0; c < v.size(); ++c) {
        if (v[c] != 0.0 && v[c] != 1.0 && v[c] != 2.0) throw InvalidField("mask values must be 0, 1 or 2");
        m.in_D[c] = v[c] == 2.0;
        m.in_E[c] = v[c] == 1.0;
    }
    return m;
}

template <class T, class Writer>
void write_file(const std::string& path, const T& value, const Grid& g, Writer w) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    w(out, value, g);
}

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path, 0);
    return in;
}

} // namespace robinfb
