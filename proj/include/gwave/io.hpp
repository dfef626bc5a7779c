#ifndef GWAVE_IO_HPP
#define GWAVE_IO_HPP

// JSON and CSV formats.
//
//   filter:  {"branch_count": N, "kmin": k, "coeffs": [[re, im], ...],
//             "normalization": "correspondence" | "mallat"}
//   IFS:     {"dim": d, "maps": [{"A": [[...]], "b": [...]}], "c1": c1, "c2": c2}
//   WordOp:  {"n": n, "terms": [{"alpha": [...], "beta": [...], "re": x, "im": y}]}
//   samples: CSV with header t,re,im

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gwave/cascade.hpp"
#include "gwave/error.hpp"
#include "gwave/ifs.hpp"
#include "gwave/trig_poly.hpp"
#include "gwave/word_algebra.hpp"

namespace gwave {

using json = nlohmann::ordered_json;

inline std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
    out << text;
    if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

inline json read_json(const std::string& path) {
    try {
        return json::parse(read_text(path));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Io, path + ": " + e.what());
    }
}

/// Shortest decimal text that reads back to the same double.
inline std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// ---------------------------------------------------------------------------
// Filters

struct LoadedFilter {
    TrigPoly filter;  // correspondence normalization
    int branch_count = 2;
    std::string normalization = "correspondence";  // as found in the file
};

inline LoadedFilter filter_from_json(const json& j) {
    try {
        LoadedFilter f;
        f.branch_count = j.value("branch_count", 2);
        f.normalization = j.value("normalization", std::string("correspondence"));
        if (f.normalization != "correspondence" && f.normalization != "mallat")
            throw Error(ErrorCode::BadInput, "unknown normalization '" + f.normalization + "'");
        std::vector<cplx> c;
        for (const auto& e : j.at("coeffs")) {
            if (e.is_number()) c.emplace_back(e.get<double>(), 0.0);
            else c.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
        }
        f.filter = TrigPoly(j.value("kmin", 0), std::move(c));
        if (f.normalization == "mallat") f.filter = from_mallat(f.filter, f.branch_count);
        return f;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Io, std::string("filter JSON: ") + e.what());
    }
}

inline LoadedFilter load_filter(const std::string& path) { return filter_from_json(read_json(path)); }

inline json filter_to_json(const TrigPoly& m, int n, const std::string& normalization = "correspondence") {
    const TrigPoly out = normalization == "mallat" ? to_mallat(m, n) : m;
    json coeffs = json::array();
    for (const auto& c : out.coeffs()) coeffs.push_back({c.real(), c.imag()});
    return json{{"branch_count", n}, {"kmin", out.kmin()}, {"coeffs", coeffs}, {"normalization", normalization}};
}

// ---------------------------------------------------------------------------
// IFS

inline AffineIFS ifs_from_json(const json& j) {
    try {
        AffineIFS ifs;
        ifs.dim = j.at("dim").get<int>();
        for (const auto& m : j.at("maps")) {
            AffineMap map{Eigen::MatrixXd(ifs.dim, ifs.dim), Eigen::VectorXd(ifs.dim)};
            const auto& a = m.at("A");
            const auto& b = m.at("b");
            if (static_cast<int>(a.size()) != ifs.dim || static_cast<int>(b.size()) != ifs.dim)
                throw Error(ErrorCode::DimMismatch, "map shape does not match dim");
            for (int r = 0; r < ifs.dim; ++r) {
                if (static_cast<int>(a.at(r).size()) != ifs.dim) throw Error(ErrorCode::DimMismatch, "matrix row length");
                for (int c = 0; c < ifs.dim; ++c) map.A(r, c) = a.at(r).at(c).get<double>();
                map.b(r) = b.at(r).get<double>();
            }
            ifs.maps.push_back(std::move(map));
        }
        ifs.c1 = j.at("c1").get<double>();
        ifs.c2 = j.at("c2").get<double>();
        return ifs;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Io, std::string("IFS JSON: ") + e.what());
    }
}

inline AffineIFS load_ifs(const std::string& path) { return ifs_from_json(read_json(path)); }

inline json ifs_to_json(const AffineIFS& ifs) {
    json maps = json::array();
    for (const auto& m : ifs.maps) {
        json a = json::array();
        for (int r = 0; r < ifs.dim; ++r) {
            json row = json::array();
            for (int c = 0; c < ifs.dim; ++c) row.push_back(m.A(r, c));
            a.push_back(row);
        }
        json b = json::array();
        for (int r = 0; r < ifs.dim; ++r) b.push_back(m.b(r));
        maps.push_back({{"A", a}, {"b", b}});
    }
    return json{{"dim", ifs.dim}, {"maps", maps}, {"c1", ifs.c1}, {"c2", ifs.c2}};
}

// ---------------------------------------------------------------------------
// WordOp

inline json wordop_to_json(const WordOp& a) {
    json terms = json::array();
    for (const auto& [k, c] : a.terms())
        terms.push_back({{"alpha", k.first}, {"beta", k.second}, {"re", c.real()}, {"im", c.imag()}});
    return json{{"n", a.alphabet_size()}, {"terms", terms}};
}

inline WordOp wordop_from_json(const json& j) {
    try {
        WordOp a(j.at("n").get<int>());
        for (const auto& t : j.at("terms"))
            a.add(t.at("alpha").get<Word>(), t.at("beta").get<Word>(), {t.value("re", 0.0), t.value("im", 0.0)});
        return a;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Io, std::string("WordOp JSON: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// CSV

inline std::string samples_csv(const SampledFn& f) {
    std::string out = "t,re,im\n";
    for (std::size_t k = 0; k < f.size(); ++k)
        out += format_double(f.t(k)) + "," + format_double(f.values[k].real()) + "," + format_double(f.values[k].imag()) + "\n";
    return out;
}

inline void write_samples_csv(const SampledFn& f, const std::string& path) { write_text(path, samples_csv(f)); }

/// Reads t,re,im rows; GRID_MISMATCH unless t is uniform.
inline SampledFn read_samples_csv(const std::string& path) {
    std::istringstream in(read_text(path));
    std::string line;
    std::vector<double> ts;
    SampledFn f;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == 't') continue;
        double t = 0, re = 0, im = 0;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &t, &re, &im) != 3)
            throw Error(ErrorCode::Io, path + ": malformed row '" + line + "'");
        ts.push_back(t);
        f.values.emplace_back(re, im);
    }
    if (ts.size() < 2) throw Error(ErrorCode::Io, path + ": fewer than two samples");
    f.t_min = ts.front();
    f.step = (ts.back() - ts.front()) / static_cast<double>(ts.size() - 1);
    for (std::size_t k = 0; k < ts.size(); ++k)
        if (std::abs(ts[k] - f.t(k)) > 1e-9 * std::max(1.0, std::abs(ts[k])))
            throw Error(ErrorCode::GridMismatch, path + ": samples are not uniformly spaced");
    return f;
}

inline std::string points_csv(const PointCloud& c) {
    std::string out;
    for (int j = 0; j < c.dim; ++j) out += (j ? ",x" : "x") + std::to_string(j);
    out += "\n";
    for (std::size_t i = 0; i < c.size(); ++i) {
        for (int j = 0; j < c.dim; ++j) out += (j ? "," : "") + format_double(c.point(i)[j]);
        out += "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Grid specs "a:b:h"; each field may be a fraction p/q.

struct GridSpec {
    double t_min = 0.0;
    double t_max = 0.0;
    double step = 0.0;
};

inline double parse_number(const std::string& s) {
    try {
        std::size_t used = 0;
        const auto slash = s.find('/');
        if (slash == std::string::npos) {
            const double v = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        }
        const std::string num = s.substr(0, slash), den = s.substr(slash + 1);
        const double p = std::stod(num, &used);
        if (used != num.size()) throw std::invalid_argument(s);
        const double q = std::stod(den, &used);
        if (used != den.size() || q == 0.0) throw std::invalid_argument(s);
        return p / q;
    } catch (const std::logic_error&) {
        throw Error(ErrorCode::BadInput, "not a number: '" + s + "'");
    }
}

inline GridSpec parse_grid(const std::string& spec) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : spec) {
        if (ch == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    if (parts.size() != 3) throw Error(ErrorCode::BadInput, "grid must be a:b:step, got '" + spec + "'");
    GridSpec g{parse_number(parts[0]), parse_number(parts[1]), parse_number(parts[2])};
    grid_points(g.t_min, g.t_max, g.step);
    return g;
}

} // namespace gwave

#endif // GWAVE_IO_HPP
