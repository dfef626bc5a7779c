// gwave command-line front end. Every command prints a JSON run report on
// stdout and exits 0 iff all of its verdicts pass; library errors exit 2
// with {"command", "error": {"code", "message"}} on stderr.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "gwave/gwave.hpp"

using namespace gwave;

namespace {

struct Verdict {
    std::string name;
    bool pass = false;
    double residual = 0.0;
    double tolerance = 0.0;
    std::string relation = "<=";  // residual <= tolerance, or ">" for lower bounds
};

struct RunReport {
    std::string command;
    json inputs = json::object();
    std::vector<Verdict> verdicts;
    std::vector<std::string> artifacts;
    std::optional<std::uint64_t> seed;
    json output = json::object();

    void check(const std::string& name, double residual, double tol) {
        verdicts.push_back({name, residual <= tol, residual, tol, "<="});
    }
    void check_above(const std::string& name, double value, double bound) {
        verdicts.push_back({name, value > bound, value, bound, ">"});
    }
    bool ok() const {
        for (const auto& v : verdicts)
            if (!v.pass) return false;
        return true;
    }

    json to_json() const {
        json vs = json::array();
        for (const auto& v : verdicts)
            vs.push_back({{"name", v.name}, {"pass", v.pass}, {"residual", v.residual}, {"tolerance", v.tolerance},
                          {"relation", v.relation}});
        json j{{"command", command}, {"inputs", inputs}, {"verdicts", vs}, {"artifacts", artifacts}};
        j["seed"] = seed ? json(*seed) : json(nullptr);
        if (!output.empty()) j["output"] = output;
        j["pass"] = ok();
        return j;
    }
};

// Relative output paths land in $GWAVE_OUT_DIR when it is set.
std::string out_path(const std::string& p) {
    const char* dir = std::getenv("GWAVE_OUT_DIR");
    const std::filesystem::path path(p);
    if (dir == nullptr || *dir == '\0' || path.is_absolute()) return p;
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / path).string();
}

void write_artifact(RunReport& rep, const std::string& path, const std::string& text) {
    const std::string resolved = out_path(path);
    write_text(resolved, text);
    rep.artifacts.push_back(resolved);
}

// Readable coefficients for the human-facing strings; numeric fields keep full precision.
std::string short_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

std::string poly_string(const TrigPoly& p) {
    std::string s;
    for (int k = p.kmin(); k <= p.kmax(); ++k) {
        const cplx c = p[k];
        if (c == cplx(0.0)) continue;
        if (!s.empty()) s += " + ";
        s += "(" + short_double(c.real()) + (c.imag() < 0 ? "-" : "+") + short_double(std::abs(c.imag())) + "i)z^" +
             std::to_string(k);
    }
    return s.empty() ? "0" : s;
}

std::string wordop_string(const WordOp& a) {
    if (a.is_zero()) return "0";
    std::string s;
    for (const auto& [k, c] : a.terms()) {
        if (!s.empty()) s += " + ";
        std::string coef = short_double(c.real());
        if (c.imag() != 0.0) coef = "(" + coef + (c.imag() < 0 ? "-" : "+") + short_double(std::abs(c.imag())) + "i)";
        s += coef + " s_" + (k.first.empty() ? "e" : word_string(k.first)) + " s_" +
             (k.second.empty() ? "e" : word_string(k.second)) + "*";
    }
    return s;
}

void add_mallat_verdicts(RunReport& rep, const TrigPoly& m1, double eps) {
    const MallatReport h = mallat_hypotheses(m1, 1024, eps);
    rep.check("mallat_unit_at_one", std::abs(h.modulus_at_one - 1.0), 1e-12);
    rep.check_above("mallat_nonvanishing", h.min_modulus, eps);
    rep.output["mallat"] = {{"decay", h.decay_note}, {"modulus_at_one", h.modulus_at_one},
                            {"min_modulus", h.min_modulus}, {"grid_points", h.grid_points_used}};
}

SampledFn build_phi(const TrigPoly& m1, int factors, double band, double step) {
    return scaling_fn_hat(m1, {factors, -band, band, step, 1e-3});
}

// ---------------------------------------------------------------------------

struct CheckFilterArgs {
    std::vector<std::string> filters;
    double tol = 1e-12;
    int test_degree = 8;
    int trials = 100;
    int max_degree = 10;
    std::uint64_t seed = 20240601;
    double eps = 1e-3;
};

RunReport cmd_check_filter(const CheckFilterArgs& a) {
    RunReport rep;
    rep.command = "check-filter";
    std::vector<TrigPoly> fs;
    int n = 0;
    json files = json::array();
    for (const auto& path : a.filters) {
        const LoadedFilter f = load_filter(path);
        if (n != 0 && f.branch_count != n) throw Error(ErrorCode::CountMismatch, "filters disagree on branch_count");
        n = f.branch_count;
        fs.push_back(f.filter);
        files.push_back({{"path", path}, {"normalization", f.normalization}});
    }
    rep.inputs = {{"filters", files}, {"branch_count", n}, {"tol", a.tol}, {"test_degree", a.test_degree}};

    for (std::size_t i = 0; i < fs.size(); ++i) {
        const auto u = is_unit_filter(fs[i], n, a.tol);
        rep.check("unit_filter[" + std::to_string(i + 1) + "]", u.residual, a.tol);
    }
    if (n == 2) add_mallat_verdicts(rep, fs[0], a.eps);

    std::vector<TrigPoly> bank = fs;
    if (fs.size() == 1 && n == 2 && is_unit_filter(fs[0], 2, a.tol).ok) {
        bank.push_back(haar_complete(fs[0]));
        rep.output["completed_highpass"] = poly_string(bank.back());
    }
    if (static_cast<int>(bank.size()) == n) {
        const auto b = is_filter_bank({n, bank, a.tol}, a.test_degree);
        rep.check("filter_bank_orthonormal", b.max_residual, a.tol);
        rep.check("filter_bank_complete", b.reconstruction_residual, a.tol);
        const auto c = cuntz_residuals(bank, n, a.trials, a.max_degree, a.tol, a.seed);
        double iso = 0.0;
        for (const auto& row : c.isometry_abs)
            for (double v : row) iso = std::max(iso, v);
        rep.check("cuntz_isometry", iso, a.tol);
        rep.check("cuntz_completeness", c.completeness_abs, a.tol);
        rep.seed = a.seed;
        rep.inputs["trials"] = a.trials;
        rep.inputs["max_degree"] = a.max_degree;
    }
    return rep;
}

RunReport cmd_complete(const std::string& filter, const std::string& out, int test_degree) {
    RunReport rep;
    rep.command = "complete";
    const LoadedFilter f = load_filter(filter);
    rep.inputs = {{"filter", filter}, {"out", out}};
    if (f.branch_count != 2) throw Error(ErrorCode::BadInput, "completion is defined for branch_count 2");
    const TrigPoly m2 = haar_complete(f.filter);
    const auto b = is_filter_bank({2, {f.filter, m2}}, test_degree);
    rep.check("filter_bank_orthonormal", b.max_residual, 1e-12);
    rep.check("filter_bank_complete", b.reconstruction_residual, 1e-12);
    rep.output["highpass"] = poly_string(m2);
    write_artifact(rep, out, filter_to_json(m2, 2).dump(2) + "\n");
    return rep;
}

struct CascadeArgs {
    std::string filter;
    int factors = 25;
    std::string grid = "-8:8:1/256";
    std::string out = "phi.csv";
    bool compare_haar = false;
};

RunReport cmd_cascade(const CascadeArgs& a) {
    RunReport rep;
    rep.command = "cascade";
    const LoadedFilter f = load_filter(a.filter);
    const GridSpec g = parse_grid(a.grid);
    rep.inputs = {{"filter", a.filter}, {"factors", a.factors}, {"grid", a.grid}, {"out", a.out}};
    add_mallat_verdicts(rep, f.filter, 1e-3);
    const CascadeConfig cfg{a.factors, g.t_min, g.t_max, g.step, 1e-3};
    const SampledFn phi = scaling_fn_hat(f.filter, cfg);
    rep.check("two_scale", two_scale_residual(f.filter, cfg), 1e-12);
    if (phi.exact_index(0.0)) rep.check("phi_hat_at_zero", std::abs(phi.value_at(0.0) - 1.0), 1e-12);
    if (a.compare_haar) {
        double gap = 0.0;
        for (std::size_t k = 0; k < phi.size(); ++k) gap = std::max(gap, std::abs(phi.values[k] - haar_scaling_hat(phi.t(k))));
        rep.check("haar_closed_form", gap, 1e-6);
    }
    write_artifact(rep, a.out, samples_csv(phi));
    return rep;
}

struct WaveletArgs {
    std::string filter;
    std::string high;
    int factors = 25;
    double band = 1024.0;
    std::string freq_step = "1/32";
    std::string x_grid = "-3:4:1/256";
    int jmax = 2;
    int kmax = 2;
    double gram_tol = 5e-2;
    std::string out = "psi.csv";
    std::string phi_out;
    std::string zeta_out;
};

RunReport cmd_wavelet(const WaveletArgs& a) {
    RunReport rep;
    rep.command = "wavelet";
    const LoadedFilter f = load_filter(a.filter);
    const GridSpec xg = parse_grid(a.x_grid);
    const double fstep = parse_number(a.freq_step);
    rep.inputs = {{"filter", a.filter},  {"high", a.high.empty() ? json(nullptr) : json(a.high)},
                  {"factors", a.factors}, {"band", a.band},
                  {"freq_step", fstep},  {"x_grid", a.x_grid},
                  {"jmax", a.jmax},      {"kmax", a.kmax},
                  {"gram_tol", a.gram_tol}, {"out", a.out}};
    add_mallat_verdicts(rep, f.filter, 1e-3);
    const TrigPoly m2 = a.high.empty() ? haar_complete(f.filter) : load_filter(a.high).filter;
    const auto b = is_filter_bank({2, {f.filter, m2}});
    rep.check("filter_bank", std::max(b.max_residual, b.reconstruction_residual), 1e-12);

    const SampledFn phi = build_phi(f.filter, a.factors, a.band, fstep);
    const SampledFn zeta = wavelet_hat(m2, phi);
    const auto w = wavelet_time(zeta, xg.t_min, xg.t_max, xg.step);
    rep.output["edge_value"] = w.edge_value;
    rep.output["edge_warning"] = w.edge_warning;
    rep.output["psi_norm"] = w.psi.l2_norm();
    rep.output["zeta_norm"] = zeta.l2_norm();
    const auto gram = orthonormality_gram(w.psi, -a.jmax, a.jmax, -a.kmax, a.kmax);
    rep.check("gram_orthonormality", gram.residual, a.gram_tol);

    write_artifact(rep, a.out, samples_csv(w.psi));
    if (!a.phi_out.empty()) write_artifact(rep, a.phi_out, samples_csv(phi));
    if (!a.zeta_out.empty()) write_artifact(rep, a.zeta_out, samples_csv(zeta));
    return rep;
}

RunReport cmd_gram(const std::string& psi_path, int jmax, int kmax, double tol) {
    RunReport rep;
    rep.command = "gram";
    rep.inputs = {{"psi", psi_path}, {"jmax", jmax}, {"kmax", kmax}, {"tol", tol}};
    const SampledFn psi = read_samples_csv(psi_path);
    const auto gram = orthonormality_gram(psi, -jmax, jmax, -kmax, kmax);
    rep.check("gram_orthonormality", gram.residual, tol);
    rep.output["size"] = gram.gram.rows();
    return rep;
}

RunReport cmd_groupoid(int n, int level, int max_len) {
    RunReport rep;
    rep.command = "groupoid";
    rep.inputs = {{"n", n}, {"level", level}, {"max_len", max_len}};
    if (n < 2) throw Error(ErrorCode::BadInput, "alphabet size must be >= 2");
    const WordOp s = canonical_isometry(n);
    const WordOp ss = s * adjoint(s);
    WordOp ss_formula(n);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) ss_formula.add({i}, {j}, 1.0 / n);
    const WordOp f = WordOp::term(n, {1}, {1});

    rep.output["S"] = wordop_string(normal_form(s, level));
    rep.output["SS*"] = wordop_string(normal_form(ss, level));
    rep.output["alpha(s_1 s_1*)"] = wordop_string(normal_form(alpha_endo(f), std::max(level, 2)));
    rep.output["L(s_1 s_1*)"] = wordop_string(normal_form(transfer_L(f), level));

    rep.check("isometry", word_distance(adjoint(s) * s, WordOp::identity(n)), kWordEqualityTol);
    rep.check("range_projection", word_distance(ss, ss_formula), kWordEqualityTol);
    double cp1 = 0.0, cp2 = 0.0, routes = 0.0, exel = 0.0;
    const auto basis = core_basis(n, max_len);
    for (const auto& b : basis) {
        const auto c = cp_relations_check(b, n);
        cp1 = std::max(cp1, c.cp1_residual);
        cp2 = std::max(cp2, c.cp2_residual);
        routes = std::max(routes, c.alpha_residual);
    }
    // Exel's identity on pairs drawn from the words of length <= 1
    const auto small = core_basis(n, std::min(max_len, 1));
    for (const auto& x : basis)
        for (const auto& y : small) exel = std::max(exel, word_distance(transfer_L(x * alpha_endo(y)), transfer_L(x) * y));
    rep.check("cp1", cp1, kWordEqualityTol);
    rep.check("cp2", cp2, kWordEqualityTol);
    rep.check("alpha_routes", routes, kWordEqualityTol);
    rep.check("exel_identity", exel, kWordEqualityTol);
    rep.output["core_elements"] = basis.size();
    rep.output["cp3"] = CpReport{}.cp3;
    return rep;
}

struct TransferArgs {
    std::string weight;
    std::string from_filter;
    std::string builtin;
    int n = 2;
    int cutoff = 16;
    int max_iter = 10000;
    double tol = 1e-12;
    std::string out = "moments.csv";
    std::string matrix_out;
};

RunReport cmd_transfer(const TransferArgs& a) {
    RunReport rep;
    rep.command = "transfer";
    const int given = !a.weight.empty() + !a.from_filter.empty() + !a.builtin.empty();
    if (given != 1) throw Error(ErrorCode::BadInput, "give exactly one of --weight, --from-filter, --builtin");
    TrigPoly w;
    int n = a.n;
    if (!a.weight.empty()) {
        w = load_filter(a.weight).filter;
    } else if (!a.from_filter.empty()) {
        const LoadedFilter f = load_filter(a.from_filter);
        n = f.branch_count;
        w = f.filter.conj() * f.filter * (1.0 / n);
    } else if (a.builtin == "lebesgue") {
        w = TrigPoly::constant(1.0 / n);
    } else if (a.builtin == "haar") {
        if (n != 2) throw Error(ErrorCode::BadInput, "the haar weight is for n = 2");
        w = TrigPoly(-1, {0.25, 0.5, 0.25});
    } else if (a.builtin == "cosine") {
        w = TrigPoly(-1, {0.25 / n, 1.0 / n, 0.25 / n});
    } else {
        throw Error(ErrorCode::BadInput, "unknown builtin weight '" + a.builtin + "'");
    }
    rep.inputs = {{"weight", poly_string(w)}, {"n", n}, {"cutoff", a.cutoff}, {"max_iter", a.max_iter}, {"tol", a.tol},
                  {"out", a.out}};
    const TransferMatrix t = build_transfer_matrix(w, n, a.cutoff);
    const auto r = fixed_measure(w, n, a.cutoff, a.max_iter, a.tol);
    rep.check("converged", r.converged ? 0.0 : 1.0, 0.0);
    rep.check("eigenvalue_one", std::abs(r.eigenvalue - 1.0), 1e-10);
    rep.check("fixed_point_residual", r.residual, std::max(a.tol, 1e-12));
    rep.check("quasi_invariance", quasi_invariance_residual(r.measure, w, n, a.cutoff / 2), 1e-10);
    rep.output["eigenvalue"] = r.eigenvalue;
    rep.output["iterations"] = r.iterations;
    rep.output["reality_defect"] = r.measure.reality_defect();
    rep.output["fejer_minimum"] = r.measure.fejer_minimum();

    std::string csv = "k,re,im\n";
    for (int k = -a.cutoff; k <= a.cutoff; ++k) {
        const cplx m = r.measure.moment(k);
        csv += std::to_string(k) + "," + format_double(m.real()) + "," + format_double(m.imag()) + "\n";
    }
    write_artifact(rep, a.out, csv);
    if (!a.matrix_out.empty()) {
        std::string mcsv = "row_mode,col_mode,re,im\n";
        for (int i = 0; i < t.dim(); ++i)
            for (int j = 0; j < t.dim(); ++j) {
                const cplx v = t.entries(i, j);
                if (v == cplx(0.0)) continue;
                mcsv += std::to_string(i - a.cutoff) + "," + std::to_string(j - a.cutoff) + "," + format_double(v.real()) +
                        "," + format_double(v.imag()) + "\n";
            }
        write_artifact(rep, a.matrix_out, mcsv);
    }
    return rep;
}

struct IfsArgs {
    std::string file;
    int iters = 12;
    double snap = 0.0;
    int depth = 6;
    std::string out = "pts.csv";
};

RunReport cmd_ifs_attractor(const IfsArgs& a) {
    RunReport rep;
    rep.command = "ifs attractor";
    const AffineIFS ifs = load_ifs(a.file);
    rep.inputs = {{"file", a.file}, {"iters", a.iters}, {"snap", a.snap}, {"depth", a.depth}, {"out", a.out}};
    const auto res = attractor(ifs, a.iters, a.snap);
    // per-step excess over the contraction bound h_t <= c2 h_{t-1}
    double excess = 0.0, worst_ratio = 0.0;
    for (std::size_t t = 1; t < res.distances.size(); ++t)
        excess = std::max(excess, res.distances[t] - ifs.c2 * res.distances[t - 1]);
    for (double r : res.ratios) worst_ratio = std::max(worst_ratio, r);
    rep.check("hausdorff_decay", excess, 2.0 * a.snap * std::sqrt(static_cast<double>(ifs.dim)) + 1e-12);
    rep.output["distances"] = res.distances;
    rep.output["worst_ratio"] = worst_ratio;
    rep.output["rate_bound"] = res.rate_bound;
    rep.output["points"] = res.cloud.size();
    const auto d = branch_disjointness(ifs, a.depth);
    rep.output["unlifted_min_distance"] = d.unlifted_min_distance;
    rep.output["lifted_disjoint"] = d.lifted_disjoint;
    write_artifact(rep, a.out, points_csv(res.cloud));
    return rep;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"gwave: filter banks, Cuntz relations, transfer operators and the wavelet cascade"};
    app.require_subcommand(1);
    std::string report_path;
    app.add_option("--report", report_path, "also write the run report to this file");

    CheckFilterArgs cf;
    auto* check = app.add_subcommand("check-filter", "unit filter, filter bank, Cuntz and cascade hypotheses");
    check->add_option("--filter", cf.filters, "filter JSON (repeat for a bank, low pass first)")->required();
    check->add_option("--tol", cf.tol);
    check->add_option("--test-degree", cf.test_degree);
    check->add_option("--trials", cf.trials);
    check->add_option("--max-degree", cf.max_degree);
    check->add_option("--seed", cf.seed);

    std::string complete_filter, complete_out = "m2.json";
    int complete_degree = 8;
    auto* complete = app.add_subcommand("complete", "high pass z conj(m1(-z)) for an N = 2 unit filter");
    complete->add_option("--filter", complete_filter)->required();
    complete->add_option("--out", complete_out);
    complete->add_option("--test-degree", complete_degree);

    CascadeArgs ca;
    auto* cascade = app.add_subcommand("cascade", "truncated infinite product for the scaling function");
    cascade->add_option("--filter", ca.filter)->required();
    cascade->add_option("--factors", ca.factors);
    cascade->add_option("--grid", ca.grid, "a:b:step, fractions allowed (use --grid=-8:8:1/256)");
    cascade->add_option("--out", ca.out);
    cascade->add_flag("--compare-haar", ca.compare_haar, "check against the closed-form Haar transform");

    WaveletArgs wa;
    auto* wavelet = app.add_subcommand("wavelet", "wavelet from the filter bank and its Gram matrix");
    wavelet->add_option("--filter", wa.filter)->required();
    wavelet->add_option("--high", wa.high, "high pass filter; default is the completion of --filter");
    wavelet->add_option("--factors", wa.factors);
    wavelet->add_option("--band", wa.band, "scaling function on [-band, band]");
    wavelet->add_option("--freq-step", wa.freq_step);
    wavelet->add_option("--x-grid", wa.x_grid);
    wavelet->add_option("--jmax", wa.jmax);
    wavelet->add_option("--kmax", wa.kmax);
    wavelet->add_option("--gram-tol", wa.gram_tol);
    wavelet->add_option("--out", wa.out);
    wavelet->add_option("--phi-out", wa.phi_out);
    wavelet->add_option("--zeta-out", wa.zeta_out);

    std::string gram_psi;
    int gram_jmax = 2, gram_kmax = 2;
    double gram_tol = 5e-2;
    auto* gram = app.add_subcommand("gram", "orthonormality of dilates and translates of a sampled wavelet");
    gram->add_option("--psi", gram_psi)->required();
    gram->add_option("--jmax", gram_jmax);
    gram->add_option("--kmax", gram_kmax);
    gram->add_option("--tol", gram_tol);

    int g_n = 2, g_level = 1, g_max_len = 2;
    auto* groupoid = app.add_subcommand("groupoid", "word calculus for the full shift: S, SS*, alpha, L");
    groupoid->add_option("--n", g_n);
    groupoid->add_option("--level", g_level);
    groupoid->add_option("--max-len", g_max_len);

    TransferArgs ta;
    auto* transfer = app.add_subcommand("transfer", "fixed measure of the dual transfer operator");
    transfer->add_option("--weight", ta.weight, "weight D as a coefficient JSON");
    transfer->add_option("--from-filter", ta.from_filter, "use D = |m|^2 / N");
    transfer->add_option("--builtin", ta.builtin, "lebesgue | haar | cosine");
    transfer->add_option("--n", ta.n);
    transfer->add_option("--cutoff", ta.cutoff);
    transfer->add_option("--max-iter", ta.max_iter);
    transfer->add_option("--tol", ta.tol);
    transfer->add_option("--out", ta.out);
    transfer->add_option("--matrix-out", ta.matrix_out);

    IfsArgs ia;
    auto* ifs = app.add_subcommand("ifs", "iterated function systems");
    ifs->require_subcommand(1);
    auto* attr = ifs->add_subcommand("attractor", "forward Hutchinson iteration from the fixed point of the first map");
    attr->add_option("--file", ia.file)->required();
    attr->add_option("--iters", ia.iters);
    attr->add_option("--snap", ia.snap);
    attr->add_option("--depth", ia.depth);
    attr->add_option("--out", ia.out);

    CLI11_PARSE(app, argc, argv);

    std::string command = app.get_subcommands().front()->get_name();
    try {
        RunReport rep;
        if (check->parsed()) rep = cmd_check_filter(cf);
        else if (complete->parsed()) rep = cmd_complete(complete_filter, complete_out, complete_degree);
        else if (cascade->parsed()) rep = cmd_cascade(ca);
        else if (wavelet->parsed()) rep = cmd_wavelet(wa);
        else if (gram->parsed()) rep = cmd_gram(gram_psi, gram_jmax, gram_kmax, gram_tol);
        else if (groupoid->parsed()) rep = cmd_groupoid(g_n, g_level, g_max_len);
        else if (transfer->parsed()) rep = cmd_transfer(ta);
        else {
            command = "ifs attractor";
            rep = cmd_ifs_attractor(ia);
        }
        const std::string text = rep.to_json().dump(2) + "\n";
        std::cout << text;
        if (!report_path.empty()) write_text(out_path(report_path), text);
        return rep.ok() ? 0 : 1;
    } catch (const Error& e) {
        const json err{{"command", command}, {"error", {{"code", std::string(to_string(e.code()))}, {"message", e.what()}}}};
        std::cerr << err.dump(2) << "\n";
        return 2;
    }
}
