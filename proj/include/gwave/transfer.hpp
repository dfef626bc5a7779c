#ifndef GWAVE_TRANSFER_HPP
#define GWAVE_TRANSFER_HPP

// Transfer operators L_D f(x) = sum_{y^N = x} D(y) f(y) on the circle and
// the fixed probability measures of their duals.
//
// A measure is stored through its moments mu_k = int z^k dmu, |k| <= M. The
// pairing int f dmu = sum_k f_k mu_k is bilinear, so the dual acts on moment
// vectors through the plain transpose of the coefficient matrix.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gwave/error.hpp"
#include "gwave/trig_poly.hpp"

namespace gwave {

struct TransferMatrix {
    TrigPoly weight;
    int branch_count = 2;
    int cutoff = 0;            // modes -cutoff..cutoff
    Eigen::MatrixXcd entries;  // row m, col j  <->  modes m - cutoff, j - cutoff

    int dim() const { return 2 * cutoff + 1; }
    cplx entry(int row_mode, int col_mode) const { return entries(row_mode + cutoff, col_mode + cutoff); }
};

/// Coefficient vector of f on modes -M..M (modes outside are dropped).
inline Eigen::VectorXcd to_modes(const TrigPoly& f, int cutoff) {
    Eigen::VectorXcd v(2 * cutoff + 1);
    for (int k = -cutoff; k <= cutoff; ++k) v(k + cutoff) = f[k];
    return v;
}

inline TrigPoly from_modes(const Eigen::VectorXcd& v) {
    const int cutoff = static_cast<int>((v.size() - 1) / 2);
    return TrigPoly(-cutoff, std::vector<cplx>(v.data(), v.data() + v.size()));
}

/// Entry (m, j) = N d_{N m - j}. Throws CUTOFF_TOO_SMALL if M does not cover the
/// support of D or if some degree-M input would produce modes beyond M.
inline TransferMatrix build_transfer_matrix(const TrigPoly& weight, int n, int cutoff) {
    if (n < 2) throw Error(ErrorCode::BadInput, "branch count must be >= 2");
    if (cutoff < 0) throw Error(ErrorCode::BadInput, "cutoff must be nonnegative");
    if (!weight.is_zero()) {
        const int reach = std::max(std::abs(weight.kmin()), std::abs(weight.kmax()));
        const int top = TrigPoly::floor_div(cutoff + weight.kmax(), n);
        const int bottom = TrigPoly::ceil_div(-cutoff + weight.kmin(), n);
        if (cutoff < reach || top > cutoff || bottom < -cutoff)
            throw Error(ErrorCode::CutoffTooSmall,
                        "cutoff " + std::to_string(cutoff) + " does not cover the weight support");
    }
    TransferMatrix t{weight, n, cutoff, Eigen::MatrixXcd::Zero(2 * cutoff + 1, 2 * cutoff + 1)};
    for (int m = -cutoff; m <= cutoff; ++m)
        for (int j = -cutoff; j <= cutoff; ++j) t.entries(m + cutoff, j + cutoff) = static_cast<double>(n) * weight[n * m - j];
    return t;
}

/// L_D f through the matrix.
inline TrigPoly apply_transfer(const TransferMatrix& t, const TrigPoly& f) {
    return from_modes(t.entries * to_modes(f, t.cutoff));
}

/// Direct coefficient route for L_D f, no truncation: N-divisible part of D f.
inline TrigPoly transfer_apply_exact(const TrigPoly& weight, int n, const TrigPoly& f) {
    return (weight * f).decimate(n) * static_cast<double>(n);
}

struct TorusMeasure {
    std::vector<cplx> moments;  // index k + M holds mu_k

    int cutoff() const { return static_cast<int>((moments.size() - 1) / 2); }
    cplx moment(int k) const {
        const int m = cutoff();
        if (k < -m || k > m) throw Error(ErrorCode::CutoffTooSmall, "moment " + std::to_string(k) + " not stored");
        return moments[static_cast<std::size_t>(k + m)];
    }

    static TorusMeasure lebesgue(int cutoff) {
        TorusMeasure mu;
        mu.moments.assign(static_cast<std::size_t>(2 * cutoff + 1), 0.0);
        mu.moments[static_cast<std::size_t>(cutoff)] = 1.0;
        return mu;
    }

    /// max |mu_{-k} - conj(mu_k)|.
    double reality_defect() const {
        double worst = 0.0;
        const int m = cutoff();
        for (int k = 0; k <= m; ++k) worst = std::max(worst, std::abs(moment(-k) - std::conj(moment(k))));
        return worst;
    }

    /// Minimum over a sample grid of the Fejer-smoothed density
    /// sum_{|k|<=M} (1 - |k|/(M+1)) conj(mu_k) z^k. Negative values at the truncation
    /// level only signal a warning; the moment sequence is not a density.
    double fejer_minimum(int samples = 512) const {
        const int m = cutoff();
        double lo = INFINITY;
        for (int i = 0; i < samples; ++i) {
            const double s = static_cast<double>(i) / samples;
            cplx acc = 0.0;
            for (int k = -m; k <= m; ++k)
                acc += (1.0 - std::abs(k) / (m + 1.0)) * std::conj(moment(k)) * unit_circle(s * k);
            lo = std::min(lo, acc.real());
        }
        return lo;
    }
};

struct FixedMeasureResult {
    TorusMeasure measure;
    double eigenvalue = 0.0;
    double residual = 0.0;  // max_k |(L_D* mu)_k - mu_k|
    int iterations = 0;
    bool converged = false;
};

/*
 * Power iteration for L_D* on moment vectors, restricted to the affine slice
 * mu_0 = 1: each step applies the transpose and divides by the new mu_0,
 * which is also the eigenvalue estimate. Stops once successive iterates agree
 * to tol in the max norm. Returns the last iterate with converged = false
 * after max_iter steps; callers that need the hard failure use
 * fixed_measure_or_throw().
 */
inline FixedMeasureResult fixed_measure(const TrigPoly& weight, int n, int cutoff, int max_iter = 10000,
                                        double tol = 1e-12) {
    const TransferMatrix t = build_transfer_matrix(weight, n, cutoff);
    const Eigen::MatrixXcd dual = t.entries.transpose();
    Eigen::VectorXcd mu = Eigen::VectorXcd::Zero(t.dim());
    mu(cutoff) = 1.0;
    FixedMeasureResult out;
    for (int it = 1; it <= max_iter; ++it) {
        Eigen::VectorXcd next = dual * mu;
        const cplx lambda = next(cutoff);
        if (std::abs(lambda) < 1e-300) throw Error(ErrorCode::NoConvergence, "dual iteration annihilated mu_0");
        next /= lambda;
        const double step = (next - mu).cwiseAbs().maxCoeff();
        mu = std::move(next);
        out.eigenvalue = lambda.real();
        out.iterations = it;
        if (step <= tol) {
            out.converged = true;
            break;
        }
    }
    out.measure.moments.assign(mu.data(), mu.data() + mu.size());
    out.residual = (dual * mu - mu).cwiseAbs().maxCoeff();
    return out;
}

inline FixedMeasureResult fixed_measure_or_throw(const TrigPoly& weight, int n, int cutoff, int max_iter = 10000,
                                                 double tol = 1e-12) {
    FixedMeasureResult r = fixed_measure(weight, n, cutoff, max_iter, tol);
    if (!r.converged)
        throw Error(ErrorCode::NoConvergence, "no convergence after " + std::to_string(max_iter) + " iterations");
    return r;
}

/// max_{|j| <= test_degree} |int L_D z^j dmu - int z^j dmu|, computed from moments.
inline double quasi_invariance_residual(const TorusMeasure& mu, const TrigPoly& weight, int n, int test_degree) {
    double worst = 0.0;
    for (int j = -test_degree; j <= test_degree; ++j) {
        const TrigPoly image = transfer_apply_exact(weight, n, TrigPoly::monomial(j));
        cplx lhs = 0.0;
        for (int m = image.kmin(); m <= image.kmax(); ++m) lhs += image[m] * mu.moment(m);
        worst = std::max(worst, std::abs(lhs - mu.moment(j)));
    }
    return worst;
}

/// Groupoid element (x, m - n, y) with T^m x = T^n y, T(z) = z^N.
struct ModularFunctionQuery {
    cplx x;
    int m = 0;
    cplx y;
    int n = 0;
    TrigPoly weight;
    int branch_count = 2;
};

inline cplx power_map(cplx z, int n, int times) {
    for (int i = 0; i < times; ++i) z = std::pow(z, n);
    return z;
}

/// Delta(x, m - n, y) = D(x) D(Tx)...D(T^{m-1}x) / D(y) D(Ty)...D(T^{n-1}y).
inline double modular_delta(const ModularFunctionQuery& q) {
    if (std::abs(std::abs(q.x) - 1.0) > 1e-12 || std::abs(std::abs(q.y) - 1.0) > 1e-12)
        throw Error(ErrorCode::BadInput, "points must lie on the unit circle");
    if (q.m < 0 || q.n < 0) throw Error(ErrorCode::BadInput, "orbit lengths must be nonnegative");
    if (std::abs(power_map(q.x, q.branch_count, q.m) - power_map(q.y, q.branch_count, q.n)) > 1e-9)
        throw Error(ErrorCode::Incompatible, "T^m x != T^n y");
    auto orbit_product = [&](cplx z, int len) {
        cplx p = 1.0;
        for (int k = 0; k < len; ++k) {
            const cplx d = q.weight(z);
            if (std::abs(d) <= 1e-12) throw Error(ErrorCode::ZeroWeight, "weight vanishes on the orbit");
            p *= d;
            z = std::pow(z, q.branch_count);
        }
        return p;
    };
    return (orbit_product(q.x, q.m) / orbit_product(q.y, q.n)).real();
}

} // namespace gwave

#endif // GWAVE_TRANSFER_HPP
