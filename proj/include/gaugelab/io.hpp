#pragma once

// Text-format serialization shared by the CLI and the scenario runner:
// scalar fields, sparse operator triplets, spectrum CSV, time-series CSV,
// and the key = value config files. All formats are line oriented and use
// 17 significant digits so values round-trip bit-exactly through strtod.

#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"
#include "operators.hpp"
#include "spectra.hpp"

namespace gaugelab::io {

namespace detail {

inline std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path);
    os << std::setprecision(17);
    return os;
}

inline std::ifstream open_in(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open for reading: " + path);
    return is;
}

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Scalar fields.
//
//   gaugelab-field 1
//   dim D
//   n NX NY
//   h HX HY
//   x0 X0 Y0
//   boundary periodic|dirichlet
//   values complex|real
//   <size() lines of "re im", row-major with x slowest>

inline void write_field(std::ostream& os, const ScalarField& f) {
    const Grid& g = f.grid;
    os << std::setprecision(17);
    os << "gaugelab-field 1\n";
    os << "dim " << g.dim << "\n";
    os << "n " << g.n[0] << " " << g.n[1] << "\n";
    os << "h " << g.h[0] << " " << g.h[1] << "\n";
    os << "x0 " << g.x0[0] << " " << g.x0[1] << "\n";
    os << "boundary " << (g.boundary == Boundary::Periodic ? "periodic" : "dirichlet") << "\n";
    os << "values " << (f.real_tagged ? "real" : "complex") << "\n";
    for (const cdouble& v : f.values) os << v.real() << " " << v.imag() << "\n";
    if (!os) throw IoError("write_field: stream failure");
}

inline void write_field(const std::string& path, const ScalarField& f) {
    auto os = detail::open_out(path);
    write_field(os, f);
}

inline ScalarField read_field(std::istream& is) {
    auto expect_key = [&](const char* key) {
        std::string k;
        if (!(is >> k) || k != key) throw IoError(std::string("read_field: expected '") + key + "'");
    };
    std::string magic;
    int version = 0;
    if (!(is >> magic >> version) || magic != "gaugelab-field" || version != 1)
        throw IoError("read_field: bad header");
    Grid g;
    expect_key("dim");
    if (!(is >> g.dim) || (g.dim != 1 && g.dim != 2)) throw IoError("read_field: bad dim");
    expect_key("n");
    if (!(is >> g.n[0] >> g.n[1]) || g.n[0] < 1 || g.n[1] < 1) throw IoError("read_field: bad n");
    expect_key("h");
    if (!(is >> g.h[0] >> g.h[1])) throw IoError("read_field: bad h");
    expect_key("x0");
    if (!(is >> g.x0[0] >> g.x0[1])) throw IoError("read_field: bad x0");
    expect_key("boundary");
    std::string b;
    if (!(is >> b)) throw IoError("read_field: bad boundary");
    if (b == "periodic")
        g.boundary = Boundary::Periodic;
    else if (b == "dirichlet")
        g.boundary = Boundary::Dirichlet;
    else
        throw IoError("read_field: unknown boundary '" + b + "'");
    expect_key("values");
    std::string tag;
    if (!(is >> tag) || (tag != "real" && tag != "complex"))
        throw IoError("read_field: bad values tag");
    if (g.dim == 1) g.n[1] = 1;
    ScalarField f(g, 0.0, tag == "real");
    for (int i = 0; i < g.size(); ++i) {
        double re = 0.0, im = 0.0;
        if (!(is >> re >> im)) throw IoError("read_field: truncated value list");
        f[i] = cdouble(re, im);
    }
    return f;
}

inline ScalarField read_field(const std::string& path) {
    auto is = detail::open_in(path);
    return read_field(is);
}

// ---------------------------------------------------------------------------
// Sparse operators, for cross-checking against external tools.
//
//   gaugelab-triplets 1
//   n N nnz NNZ
//   <NNZ lines of "row col re im", 0-based indices>

inline void write_operator(std::ostream& os, const HermitianOperator& op) {
    os << std::setprecision(17);
    os << "gaugelab-triplets 1\n";
    os << "n " << op.n << " nnz " << op.entries.nonZeros() << "\n";
    for (int k = 0; k < op.entries.outerSize(); ++k)
        for (Eigen::SparseMatrix<cdouble>::InnerIterator it(op.entries, k); it; ++it)
            os << it.row() << " " << it.col() << " " << it.value().real() << " "
               << it.value().imag() << "\n";
    if (!os) throw IoError("write_operator: stream failure");
}

inline void write_operator(const std::string& path, const HermitianOperator& op) {
    auto os = detail::open_out(path);
    write_operator(os, op);
}

inline HermitianOperator read_operator(std::istream& is) {
    std::string magic, nkey, nnzkey;
    int version = 0, n = 0;
    long long nnz = 0;
    if (!(is >> magic >> version) || magic != "gaugelab-triplets" || version != 1)
        throw IoError("read_operator: bad header");
    if (!(is >> nkey >> n >> nnzkey >> nnz) || nkey != "n" || nnzkey != "nnz" || n < 0 || nnz < 0)
        throw IoError("read_operator: bad size line");
    std::vector<Eigen::Triplet<cdouble>> trips;
    trips.reserve(static_cast<size_t>(nnz));
    for (long long e = 0; e < nnz; ++e) {
        int r = 0, c = 0;
        double re = 0.0, im = 0.0;
        if (!(is >> r >> c >> re >> im)) throw IoError("read_operator: truncated triplet list");
        if (r < 0 || r >= n || c < 0 || c >= n) throw IoError("read_operator: index out of range");
        trips.emplace_back(r, c, cdouble(re, im));
    }
    return gaugelab::detail::seal_operator(n, trips);
}

inline HermitianOperator read_operator(const std::string& path) {
    auto is = detail::open_in(path);
    return read_operator(is);
}

// ---------------------------------------------------------------------------
// Spectrum CSV: "index,eigenvalue,residual".

inline void write_spectrum_csv(std::ostream& os, const Spectrum& s) {
    os << std::setprecision(17);
    os << "index,eigenvalue,residual\n";
    for (size_t i = 0; i < s.eigenvalues.size(); ++i)
        os << i << "," << s.eigenvalues[i] << ","
           << (i < s.residuals.size() ? s.residuals[i] : 0.0) << "\n";
    if (!os) throw IoError("write_spectrum_csv: stream failure");
}

inline void write_spectrum_csv(const std::string& path, const Spectrum& s) {
    auto os = detail::open_out(path);
    write_spectrum_csv(os, s);
}

// Generic numeric time series (used for phase/norm traces).
inline void write_csv(std::ostream& os, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
    os << std::setprecision(17);
    for (size_t c = 0; c < header.size(); ++c) os << header[c] << (c + 1 < header.size() ? "," : "");
    os << "\n";
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw IoError("write_csv: row width does not match the header");
        for (size_t c = 0; c < row.size(); ++c) os << row[c] << (c + 1 < row.size() ? "," : "");
        os << "\n";
    }
    if (!os) throw IoError("write_csv: stream failure");
}

inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
    auto os = detail::open_out(path);
    write_csv(os, header, rows);
}

// ---------------------------------------------------------------------------
// Config files: one "key = value" per line, '#' starts a comment, blank
// lines ignored. Values are single tokens (numbers or names).

using ConfigMap = std::map<std::string, std::string>;

inline ConfigMap parse_config(std::istream& is) {
    ConfigMap out;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
        out[key] = value;
    }
    return out;
}

inline ConfigMap parse_config_file(const std::string& path) {
    auto is = detail::open_in(path);
    return parse_config(is);
}

inline double config_double(const ConfigMap& cfg, const std::string& key, double fallback) {
    const auto it = cfg.find(key);
    if (it == cfg.end()) return fallback;
    try {
        size_t used = 0;
        const double v = std::stod(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument(it->second);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not a number: " + it->second);
    }
}

inline int config_int(const ConfigMap& cfg, const std::string& key, int fallback) {
    const double v = config_double(cfg, key, static_cast<double>(fallback));
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
        throw ConfigError("config key '" + key + "': not an integer");
    return i;
}

inline std::string config_string(const ConfigMap& cfg, const std::string& key,
                                 const std::string& fallback) {
    const auto it = cfg.find(key);
    return it == cfg.end() ? fallback : it->second;
}

}  // namespace gaugelab::io
