#ifndef GWAVE_CASCADE_HPP
#define GWAVE_CASCADE_HPP

// Infinite product phi^(t) = prod_k m'(e^{2 pi i 2^{-k} t}) for a dyadic low
// pass, the wavelet it produces with a high pass, and the multiresolution
// checks built on them. All transforms here use phi^(t) = int phi(x) e^{2 pi i x t} dx,
// so for the Haar pair phi^(t) = e^{i pi t} sin(pi t)/(pi t) and the inverse
// transform carries e^{-2 pi i x t}.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gwave/correspondence.hpp"
#include "gwave/cuntz.hpp"
#include "gwave/error.hpp"
#include "gwave/trig_poly.hpp"

namespace gwave {

/// Complex samples at t_min + k step, k = 0..size-1.
struct SampledFn {
    double t_min = 0.0;
    double step = 1.0;
    std::vector<cplx> values;

    std::size_t size() const { return values.size(); }
    double t_max() const { return t_min + static_cast<double>(values.empty() ? 0 : values.size() - 1) * step; }
    double t(std::size_t k) const { return t_min + static_cast<double>(k) * step; }

    /// Index of a grid point equal to t up to 1e-9 steps.
    std::optional<std::size_t> exact_index(double t) const {
        const double r = (t - t_min) / step;
        const double k = std::round(r);
        if (std::abs(r - k) > 1e-9 || k < 0 || k > static_cast<double>(values.size()) - 1) return std::nullopt;
        return static_cast<std::size_t>(k);
    }

    bool covers(double t) const { return t >= t_min - 1e-9 * step && t <= t_max() + 1e-9 * step; }

    /// Grid value when t is a grid point, linear interpolation otherwise.
    cplx value_at(double t) const {
        if (auto k = exact_index(t)) return values[*k];
        if (!covers(t)) throw Error(ErrorCode::GridTooNarrow, "t = " + std::to_string(t) + " outside the grid");
        const double r = (t - t_min) / step;
        const auto k = std::min(static_cast<std::size_t>(std::floor(r)), values.size() - 2);
        const double w = r - static_cast<double>(k);
        return (1.0 - w) * values[k] + w * values[k + 1];
    }

    double l2_norm() const {
        double s = 0.0;
        for (std::size_t k = 0; k < values.size(); ++k) {
            const double w = (k == 0 || k + 1 == values.size()) ? 0.5 : 1.0;
            s += w * std::norm(values[k]);
        }
        return std::sqrt(s * step);
    }
};

/// Number of points of the grid a:b:h; GRID_MISMATCH unless (b - a)/h is an integer.
inline std::size_t grid_points(double a, double b, double h) {
    if (!(h > 0.0) || !(b >= a)) throw Error(ErrorCode::GridMismatch, "grid needs step > 0 and t_max >= t_min");
    const double r = (b - a) / h;
    const double k = std::round(r);
    if (std::abs(r - k) > 1e-9 * std::max(1.0, r)) throw Error(ErrorCode::GridMismatch, "(t_max - t_min)/step is not an integer");
    return static_cast<std::size_t>(k) + 1;
}

inline SampledFn sample(const std::function<cplx(double)>& f, double a, double b, double h) {
    SampledFn out{a, h, {}};
    const std::size_t n = grid_points(a, b, h);
    out.values.resize(n);
    for (std::size_t k = 0; k < n; ++k) out.values[k] = f(out.t(k));
    return out;
}

struct CascadeConfig {
    int factors = 25;
    double t_min = -8.0;
    double t_max = 8.0;
    double step = 1.0 / 256.0;
    double purity_margin = 1e-3;
};

// ---------------------------------------------------------------------------
// Closed forms for the Haar pair.

inline cplx haar_scaling_hat(double t) {
    if (t == 0.0) return 1.0;
    const double pt = std::numbers::pi * t;
    return unit_circle(0.5 * t) * (std::sin(pt) / pt);
}

/// 1 on [0, 1/2), -1 on [1/2, 1), 0 elsewhere.
inline double haar_wavelet(double x) {
    if (x >= 0.0 && x < 0.5) return 1.0;
    if (x >= 0.5 && x < 1.0) return -1.0;
    return 0.0;
}

// ---------------------------------------------------------------------------

struct MallatReport {
    bool decay = true;  // finite support
    std::string decay_note = "finite Fourier support: coefficient decay holds trivially";
    bool unit_at_one = false;
    double modulus_at_one = 0.0;
    bool nonvanishing = false;
    double min_modulus = 0.0;  // min |m'(e^{ix})| on [-pi/2, pi/2]
    int grid_points_used = 0;
    double epsilon = 0.0;

    bool ok() const { return decay && unit_at_one && nonvanishing; }
};

/// Hypotheses of the cascade theorem for m' = m1/sqrt(2), m1 in correspondence normalization.
inline MallatReport mallat_hypotheses(const TrigPoly& m1, int grid_points = 1024, double eps = 1e-3) {
    MallatReport rep;
    rep.epsilon = eps;
    const TrigPoly mp = to_mallat(m1, 2);
    rep.modulus_at_one = std::abs(mp.at(0.0));
    rep.unit_at_one = std::abs(rep.modulus_at_one - 1.0) <= 1e-12;
    auto min_on = [&](int points) {
        double lo = INFINITY;
        for (int i = 0; i <= points; ++i) lo = std::min(lo, std::abs(mp.at(-0.25 + 0.5 * i / points)));
        return lo;
    };
    int points = std::max(grid_points, 8);
    double prev = min_on(points);
    for (int round = 0; round < 16; ++round) {
        const double cur = min_on(2 * points);
        points *= 2;
        const bool stable = std::abs(cur - prev) <= 0.01 * std::max(prev, 1e-300);
        prev = cur;
        if (stable) break;
    }
    rep.min_modulus = prev;
    rep.grid_points_used = points;
    rep.nonvanishing = rep.min_modulus >= eps;
    return rep;
}

namespace detail {
inline cplx truncated_product(const TrigPoly& mp, double t, int factors) {
    cplx p = 1.0;
    double s = t;
    for (int k = 1; k <= factors; ++k) {
        s *= 0.5;
        p *= mp.at(s);
    }
    return p;
}
} // namespace detail

/// phi^_K on the configured grid. HYPOTHESIS_FAIL if |m'(1)| != 1.
inline SampledFn scaling_fn_hat(const TrigPoly& m1, const CascadeConfig& cfg) {
    if (cfg.factors < 1) throw Error(ErrorCode::BadInput, "factor count must be >= 1");
    const TrigPoly mp = to_mallat(m1, 2);
    const double at_one = std::abs(mp.at(0.0));
    if (std::abs(at_one - 1.0) > 1e-12)
        throw Error(ErrorCode::HypothesisFail, "|m'(1)| = " + std::to_string(at_one) + ", expected 1");
    return sample([&](double t) { return detail::truncated_product(mp, t, cfg.factors); }, cfg.t_min, cfg.t_max,
                  cfg.step);
}

/// max |phi^_K(2t) - m'(e^{2 pi i t}) phi^_{K-1}(t)| over the grid.
inline double two_scale_residual(const TrigPoly& m1, const CascadeConfig& cfg) {
    const TrigPoly mp = to_mallat(m1, 2);
    const std::size_t n = grid_points(cfg.t_min, cfg.t_max, cfg.step);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = cfg.t_min + static_cast<double>(i) * cfg.step;
        const cplx lhs = detail::truncated_product(mp, 2.0 * t, cfg.factors);
        const cplx rhs = mp.at(t) * detail::truncated_product(mp, t, cfg.factors - 1);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

struct PartitionReport {
    double residual = 0.0;    // max_x |sum_{|k| <= k_max} |phi^(x+k)|^2 - 1|
    double tail_bound = 0.0;  // 2/(pi^2 (k_max - 1)), valid for a 1/(pi |t|) envelope
    int k_max = 0;
    std::size_t points = 0;
};

inline PartitionReport partition_unity_residual(const SampledFn& phi, int k_max) {
    if (k_max < 2) throw Error(ErrorCode::BadInput, "k_max must be >= 2");
    const double per = 1.0 / phi.step;
    const auto cells = static_cast<std::size_t>(std::llround(per));
    if (std::abs(per - static_cast<double>(cells)) > 1e-9 * per)
        throw Error(ErrorCode::GridMismatch, "step does not divide 1");
    if (!phi.exact_index(0.0) || !phi.covers(-k_max - 1.0) || !phi.covers(k_max + 1.0))
        throw Error(ErrorCode::GridMismatch, "grid must contain 0 and cover [-k_max-1, k_max+1]");
    PartitionReport rep;
    rep.k_max = k_max;
    rep.points = cells;
    rep.tail_bound = 2.0 / (std::numbers::pi * std::numbers::pi * (k_max - 1));
    const std::size_t zero = *phi.exact_index(0.0);
    for (std::size_t i = 0; i < cells; ++i) {
        double s = 0.0;
        for (int k = -k_max; k <= k_max; ++k) {
            const auto idx = static_cast<std::ptrdiff_t>(zero + i) + static_cast<std::ptrdiff_t>(k) * static_cast<std::ptrdiff_t>(cells);
            s += std::norm(phi.values[static_cast<std::size_t>(idx)]);
        }
        rep.residual = std::max(rep.residual, std::abs(s - 1.0));
    }
    return rep;
}

/// zeta(x) = m2'(e^{pi i x}) phi^(x/2), sampled at x = 2t for every t of the phi^ grid.
inline SampledFn wavelet_hat(const TrigPoly& m2, const SampledFn& phi) {
    if (phi.size() < 2 || !(phi.step > 0.0)) throw Error(ErrorCode::GridMismatch, "phi^ grid is degenerate");
    const TrigPoly mp = to_mallat(m2, 2);
    SampledFn out{2.0 * phi.t_min, 2.0 * phi.step, std::vector<cplx>(phi.size())};
    for (std::size_t k = 0; k < phi.size(); ++k) out.values[k] = mp.at(phi.t(k)) * phi.values[k];
    return out;
}

struct WaveletTimeResult {
    SampledFn psi;
    double edge_value = 0.0;  // max |zeta| at the two grid ends
    bool edge_warning = false;
};

/// psi(x) = int zeta(t) e^{-2 pi i x t} dt by the trapezoid rule, on x_min:x_max:x_step.
inline WaveletTimeResult wavelet_time(const SampledFn& zeta, double x_min, double x_max, double x_step) {
    WaveletTimeResult out;
    out.psi = SampledFn{x_min, x_step, std::vector<cplx>(grid_points(x_min, x_max, x_step))};
    if (zeta.size() < 2) return out;
    out.edge_value = std::max(std::abs(zeta.values.front()), std::abs(zeta.values.back()));
    out.edge_warning = out.edge_value > 1e-3;
    const std::size_t n = zeta.size();
    constexpr std::size_t kReseed = 512;
    for (std::size_t i = 0; i < out.psi.size(); ++i) {
        const double x = out.psi.t(i);
        const cplx ratio = unit_circle(-x * zeta.step);
        cplx acc = 0.0;
        cplx e;
        for (std::size_t k = 0; k < n; ++k) {
            if (k % kReseed == 0) e = unit_circle(-x * zeta.t(k));
            const double w = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
            acc += w * zeta.values[k] * e;
            e *= ratio;
        }
        out.psi.values[i] = acc * zeta.step;
    }
    return out;
}

/// L^2 distance on [a, b] between samples and a reference, rectangle rule on the
/// sample points inside [a, b).
inline double l2_distance_on(const SampledFn& f, const std::function<cplx(double)>& ref, double a, double b) {
    double s = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double x = f.t(k);
        if (x >= a && x < b) s += std::norm(f.values[k] - ref(x));
    }
    return std::sqrt(s * f.step);
}

struct GramReport {
    std::vector<std::pair<int, int>> index;  // (j, k) per row
    Eigen::MatrixXcd gram;
    double residual = 0.0;  // max |G - I|
};

/*
 * Gram matrix of 2^{j/2} psi(2^j x - k). psi is read as a step function taking
 * the sample value on [x_i, x_i + h). Each inner product is summed exactly on
 * the common refinement of both step functions, so closed-form step functions
 * on a dyadic grid give exact entries. GRID_TOO_NARROW when psi still carries
 * more than 5% of its peak in the outer sixteenth of the grid at either end.
 */
inline GramReport orthonormality_gram(const SampledFn& psi, int j_min, int j_max, int k_min, int k_max) {
    const std::size_t n = psi.size();
    if (n < 16) throw Error(ErrorCode::GridTooNarrow, "psi grid has fewer than 16 points");
    double peak = 0.0;
    for (const auto& v : psi.values) peak = std::max(peak, std::abs(v));
    const std::size_t rim = std::max<std::size_t>(1, n / 16);
    double edge = 0.0;
    for (std::size_t i = 0; i < rim; ++i) edge = std::max({edge, std::abs(psi.values[i]), std::abs(psi.values[n - 1 - i])});
    if (edge > 0.05 * peak)
        throw Error(ErrorCode::GridTooNarrow, "psi has not decayed at the grid ends");

    GramReport rep;
    for (int j = j_min; j <= j_max; ++j)
        for (int k = k_min; k <= k_max; ++k) rep.index.emplace_back(j, k);
    const auto m = static_cast<Eigen::Index>(rep.index.size());
    rep.gram = Eigen::MatrixXcd::Zero(m, m);

    const double h = psi.step;
    const double a = psi.t_min;
    const double b = a + static_cast<double>(n) * h;  // end of the last step
    auto value = [&](double y) -> cplx {
        const double r = (y - a) / h;
        if (r < 0.0) return 0.0;
        const auto i = static_cast<std::size_t>(std::floor(r));
        return i < n ? psi.values[i] : cplx(0.0);
    };
    for (Eigen::Index p = 0; p < m; ++p)
        for (Eigen::Index q = p; q < m; ++q) {
            const auto [j1, k1] = rep.index[static_cast<std::size_t>(p)];
            const auto [j2, k2] = rep.index[static_cast<std::size_t>(q)];
            const double s1 = std::ldexp(1.0, -j1), s2 = std::ldexp(1.0, -j2);
            const double lo = std::max((a + k1) * s1, (a + k2) * s2);
            const double hi = std::min((b + k1) * s1, (b + k2) * s2);
            cplx acc = 0.0;
            if (hi > lo) {
                const double fine = h * std::ldexp(1.0, -std::max(j1, j2));
                const auto c0 = static_cast<long long>(std::floor(lo / fine));
                const auto c1 = static_cast<long long>(std::ceil(hi / fine));
                const double d1 = std::ldexp(1.0, j1), d2 = std::ldexp(1.0, j2);
                for (long long c = c0; c < c1; ++c) {
                    const double x = (static_cast<double>(c) + 0.5) * fine;
                    acc += std::conj(value(d1 * x - k1)) * value(d2 * x - k2);
                }
                acc *= fine * std::sqrt(d1 * d2);
            }
            rep.gram(p, q) = acc;
            rep.gram(q, p) = std::conj(acc);
        }
    rep.residual = (rep.gram - Eigen::MatrixXcd::Identity(m, m)).cwiseAbs().maxCoeff();
    return rep;
}

// ---------------------------------------------------------------------------
// Multiresolution isometries.

/// (R_n xi)(x) = 2^{-n/2} xi(e^{2 pi i 2^{-n} x}) phi^(2^{-n} x) on the given x points.
inline std::vector<cplx> mra_isometry_R(int n, const TrigPoly& xi, const SampledFn& phi, const std::vector<double>& x_grid) {
    std::vector<cplx> out(x_grid.size());
    const double scale = std::ldexp(1.0, -n);
    const double amp = std::pow(2.0, -0.5 * n);
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        const double s = scale * x_grid[i];
        if (!phi.covers(s))
            throw Error(ErrorCode::GridTooNarrow, "2^-n x = " + std::to_string(s) + " outside the phi^ grid");
        out[i] = amp * xi.at(s) * phi.value_at(s);
    }
    return out;
}

inline std::vector<double> uniform_points(double a, double b, double h) {
    std::vector<double> out(grid_points(a, b, h));
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = a + static_cast<double>(k) * h;
    return out;
}

/// max over x of |R_{n+1}(S_1 xi) - R_n(xi)|.
inline double intertwining_residual(int n, const TrigPoly& m1, const TrigPoly& xi, const SampledFn& phi,
                                    const std::vector<double>& x_grid) {
    const auto lhs = mra_isometry_R(n + 1, apply_S({m1, 2}, xi), phi, x_grid);
    const auto rhs = mra_isometry_R(n, xi, phi, x_grid);
    double worst = 0.0;
    for (std::size_t i = 0; i < lhs.size(); ++i) worst = std::max(worst, std::abs(lhs[i] - rhs[i]));
    return worst;
}

namespace detail {
inline Eigen::MatrixXcd monomial_images(int n, int lo, int hi, const SampledFn& phi, const std::vector<double>& x_grid) {
    Eigen::MatrixXcd a(static_cast<Eigen::Index>(x_grid.size()), hi - lo + 1);
    for (int k = lo; k <= hi; ++k) {
        const auto col = mra_isometry_R(n, TrigPoly::monomial(k), phi, x_grid);
        for (std::size_t i = 0; i < col.size(); ++i) a(static_cast<Eigen::Index>(i), k - lo) = col[i];
    }
    return a;
}

inline double ls_relative_residual(const Eigen::MatrixXcd& basis, const Eigen::VectorXcd& target) {
    const Eigen::VectorXcd coef = basis.colPivHouseholderQr().solve(target);
    const double scale = target.norm();
    return scale == 0.0 ? 0.0 : (basis * coef - target).norm() / scale;
}
} // namespace detail

/// Worst relative least-squares residual of R_n(z^k), |k| <= degree, against
/// span R_{n+1}(z^j) over the modes S_1 z^k can reach.
inline double nesting_residual(int n, const TrigPoly& m1, int degree, const SampledFn& phi, const std::vector<double>& x_grid) {
    const int lo = -2 * degree + m1.kmin();
    const int hi = 2 * degree + m1.kmax();
    const Eigen::MatrixXcd fine = detail::monomial_images(n + 1, lo, hi, phi, x_grid);
    double worst = 0.0;
    for (int k = -degree; k <= degree; ++k) {
        const Eigen::MatrixXcd col = detail::monomial_images(n, k, k, phi, x_grid);
        worst = std::max(worst, detail::ls_relative_residual(fine, col.col(0)));
    }
    return worst;
}

/// Relative least-squares residual of target samples against span R_n(z^k), |k| <= degree.
inline double density_residual(int n, int degree, const SampledFn& phi, const std::vector<double>& x_grid,
                               const std::vector<cplx>& target) {
    const Eigen::MatrixXcd basis = detail::monomial_images(n, -degree, degree, phi, x_grid);
    const Eigen::VectorXcd y = Eigen::Map<const Eigen::VectorXcd>(target.data(), static_cast<Eigen::Index>(target.size()));
    return detail::ls_relative_residual(basis, y);
}

struct PurityReport {
    bool pure = false;
    double fraction = 0.0;  // share of sample points with ||m1| - 1| > eps
    int grid_points = 0;
    double epsilon = 0.0;
};

/// S_1 is pure when |m1| is not 1 on a set of positive measure; tested as more
/// than 10% of the sample points off modulus one by eps. m1 is taken in
/// correspondence normalization, where a unimodular m1 makes S_1 a unitary
/// multiplication twisted by z -> z^2.
inline PurityReport purity_check(const TrigPoly& m1, int grid_points = 4096, double eps = 1e-3) {
    PurityReport rep;
    rep.grid_points = grid_points;
    rep.epsilon = eps;
    int off = 0;
    for (int i = 0; i < grid_points; ++i)
        if (std::abs(std::abs(m1.at(static_cast<double>(i) / grid_points)) - 1.0) > eps) ++off;
    rep.fraction = static_cast<double>(off) / grid_points;
    rep.pure = rep.fraction > 0.1;
    return rep;
}

} // namespace gwave

#endif // GWAVE_CASCADE_HPP
