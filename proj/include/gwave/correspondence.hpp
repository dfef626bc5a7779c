#ifndef GWAVE_CORRESPONDENCE_HPP
#define GWAVE_CORRESPONDENCE_HPP

// Deaconu correspondence for T(z) = z^N on the circle: C(T) with the
// C(T)-valued inner product <xi, eta>(x) = (1/N) sum_{y^N = x} conj(xi(y)) eta(y),
// left action (a . xi)(x) = a(x) xi(x) and right action (xi . a)(x) = xi(x) a(x^N).
//
// Filters are stored in correspondence normalization, <m, m> = 1, so the
// Haar low pass is (1 + z)/sqrt(2). The Mallat-normalized filter m / sqrt(N)
// is produced on demand by to_mallat().

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "gwave/error.hpp"
#include "gwave/trig_poly.hpp"

namespace gwave {

/// <xi, eta> as an element of C(T): the N-divisible part of conj(xi) eta.
inline TrigPoly corr_inner(const TrigPoly& xi, const TrigPoly& eta, int n) {
    if (n < 2) throw Error(ErrorCode::BadInput, "branch count must be >= 2");
    return (xi.conj() * eta).decimate(n);
}

/// Right action xi . a = xi(z) a(z^N).
inline TrigPoly right_act(const TrigPoly& xi, const TrigPoly& a, int n) { return xi * a.dilate(n); }

inline TrigPoly to_mallat(const TrigPoly& m, int n) { return m * (1.0 / std::sqrt(static_cast<double>(n))); }
inline TrigPoly from_mallat(const TrigPoly& m, int n) { return m * std::sqrt(static_cast<double>(n)); }

inline TrigPoly haar_lowpass() { return TrigPoly(0, {std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2}); }

/// Daubechies 4-tap low pass; coefficients sum to sqrt(2), i.e. correspondence normalization.
inline TrigPoly daubechies4_lowpass() {
    const double r3 = std::sqrt(3.0);
    const double d = 4.0 * std::numbers::sqrt2;
    return TrigPoly(0, {(1 + r3) / d, (3 + r3) / d, (3 - r3) / d, (1 - r3) / d});
}

struct UnitFilterReport {
    bool ok = false;
    double residual = 0.0;  // max coefficient norm of <m, m> - 1
};

inline UnitFilterReport is_unit_filter(const TrigPoly& m, int n, double tol = 1e-12) {
    const double r = (corr_inner(m, m, n) - TrigPoly::constant(1.0)).max_abs();
    return {r <= tol, r};
}

struct FilterBank {
    int branch_count = 2;
    std::vector<TrigPoly> filters;  // filters[0] is the low pass
    double tol = 1e-12;
};

struct FilterBankReport {
    bool ok = false;
    bool orthonormal = false;
    bool complete = false;
    std::vector<std::vector<double>> residuals;  // |<m_i, m_j> - delta_ij| in max coefficient norm
    double max_residual = 0.0;
    double reconstruction_residual = 0.0;  // worst over monomials z^k, |k| <= test_degree
    int test_degree = 8;
};

/// Module reconstruction xi -> sum_i m_i . <m_i, xi>.
inline TrigPoly bank_reconstruct(const std::vector<TrigPoly>& vectors, int n, const TrigPoly& xi) {
    TrigPoly out;
    for (const auto& v : vectors) out += right_act(v, corr_inner(v, xi, n), n);
    return out;
}

/// Orthonormality of all pairs plus reconstruction on monomials up to test_degree.
inline FilterBankReport is_filter_bank(const FilterBank& bank, int test_degree = 8) {
    const auto n = static_cast<std::size_t>(bank.branch_count);
    if (bank.filters.size() != n)
        throw Error(ErrorCode::CountMismatch, "bank has " + std::to_string(bank.filters.size()) +
                                                  " filters, branch count is " + std::to_string(n));
    FilterBankReport rep;
    rep.test_degree = test_degree;
    rep.residuals.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            TrigPoly g = corr_inner(bank.filters[i], bank.filters[j], bank.branch_count);
            if (i == j) g -= TrigPoly::constant(1.0);
            rep.residuals[i][j] = g.max_abs();
            rep.max_residual = std::max(rep.max_residual, rep.residuals[i][j]);
        }
    for (int k = -test_degree; k <= test_degree; ++k) {
        const TrigPoly xi = TrigPoly::monomial(k);
        const double r = max_distance(bank_reconstruct(bank.filters, bank.branch_count, xi), xi);
        rep.reconstruction_residual = std::max(rep.reconstruction_residual, r);
    }
    rep.orthonormal = rep.max_residual <= bank.tol;
    rep.complete = rep.reconstruction_residual <= bank.tol;
    rep.ok = rep.orthonormal && rep.complete;
    return rep;
}

/// High pass completing a unit m1 for N = 2: m2(z) = z conj(m1(-z)),
/// coefficientwise sum_k conj(c_k) (-1)^k z^{1-k}.
inline TrigPoly haar_complete(const TrigPoly& m1, double tol = 1e-10) {
    const auto unit = is_unit_filter(m1, 2, tol);
    if (!unit.ok)
        throw Error(ErrorCode::NotUnit, "low pass is not a unit vector (residual " + std::to_string(unit.residual) + ")");
    return m1.reflect().conj().shift(1);
}

/// Max of ||theta| - 1| over an equispaced sample of the circle.
inline double unimodular_defect(const TrigPoly& theta, int samples = 0) {
    if (samples <= 0) samples = 256 + 8 * static_cast<int>(theta.size());
    double worst = 0.0;
    for (int i = 0; i < samples; ++i)
        worst = std::max(worst, std::abs(std::abs(theta.at(static_cast<double>(i) / samples)) - 1.0));
    return worst;
}

/// m2(z) theta(z^N); every other completion of the same low pass has this form.
inline TrigPoly modulate_highpass(const TrigPoly& m2, const TrigPoly& theta, double tol = 1e-10, int n = 2) {
    const double defect = unimodular_defect(theta);
    if (defect > tol) throw Error(ErrorCode::NotUnimodular, "theta deviates from modulus one by " + std::to_string(defect));
    return right_act(m2, theta, n);
}

// ---------------------------------------------------------------------------
// Tight frames (quasi-bases) from a partition of unity.

struct TightFrame {
    int branch_count = 2;
    std::vector<TrigPoly> vectors;
    int arcs = 0;
    int degree = 0;
    double overlap = 0.0;
    double tol = 0.0;  // measured reconstruction residual on the monomial test set
};

struct FrameReport {
    double reconstruction_residual = 0.0;
    double frame_equality_residual = 0.0;
};

/// Worst residuals of xi = sum psi_i . <psi_i, xi> and
/// <xi, xi> = sum <xi, psi_i><psi_i, xi> over monomials |k| <= test_degree.
inline FrameReport frame_check(const TightFrame& frame, int test_degree = 8) {
    FrameReport rep;
    const int n = frame.branch_count;
    for (int k = -test_degree; k <= test_degree; ++k) {
        const TrigPoly xi = TrigPoly::monomial(k);
        rep.reconstruction_residual =
            std::max(rep.reconstruction_residual, max_distance(bank_reconstruct(frame.vectors, n, xi), xi));
        TrigPoly sum;
        for (const auto& v : frame.vectors) sum += corr_inner(xi, v, n) * corr_inner(v, xi, n);
        rep.frame_equality_residual = std::max(rep.frame_equality_residual, max_distance(sum, corr_inner(xi, xi, n)));
    }
    return rep;
}

namespace detail {

// Raised-cosine ramp: 0 -> 1 on [0, 1] with vanishing first and second derivatives at the ends.
inline double raised_cosine_ramp(double t) {
    t = std::clamp(t, 0.0, 1.0);
    return t - std::sin(2.0 * std::numbers::pi * t) / (2.0 * std::numbers::pi);
}

// sqrt(u_j(s)) for arc j of M, centred at j/M with half-length (1 + overlap)/(2M).
// Adjacent profiles are cos/sin of the same angle, so sum_j u_j = 1 exactly.
inline double sqrt_partition(int j, int arcs, double overlap, double s) {
    double d = s - static_cast<double>(j) / arcs;
    d -= std::round(d);
    const double a = std::abs(d);
    const double core = (1.0 - overlap) / (2.0 * arcs);
    const double half = (1.0 + overlap) / (2.0 * arcs);
    if (a >= half) return 0.0;
    if (a <= core) return 1.0;
    return std::cos(0.5 * std::numbers::pi * raised_cosine_ramp((a - core) / (half - core)));
}

// Fourier coefficients on modes [-degree, degree] of a sampled periodic function.
template <class F>
TrigPoly fourier_truncate(F&& f, int degree, int samples) {
    std::vector<cplx> vals(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) vals[static_cast<std::size_t>(i)] = f(static_cast<double>(i) / samples);
    std::vector<cplx> roots(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) roots[static_cast<std::size_t>(i)] = unit_circle(static_cast<double>(i) / samples);
    std::vector<cplx> c(static_cast<std::size_t>(2 * degree + 1));
    for (int k = -degree; k <= degree; ++k) {
        cplx acc = 0.0;
        for (int i = 0; i < samples; ++i) {
            long long idx = (static_cast<long long>(-k) * i) % samples;
            if (idx < 0) idx += samples;
            acc += vals[static_cast<std::size_t>(i)] * roots[static_cast<std::size_t>(idx)];
        }
        c[static_cast<std::size_t>(k + degree)] = acc / static_cast<double>(samples);
    }
    return TrigPoly(-degree, std::move(c));
}

inline TightFrame frame_at_degree(int n, double overlap, int degree) {
    TightFrame frame;
    frame.branch_count = n;
    frame.arcs = n + 1;
    frame.degree = degree;
    frame.overlap = overlap;
    const int samples = std::max(4096, 16 * degree);
    const double scale = std::sqrt(static_cast<double>(n));
    for (int j = 0; j < frame.arcs; ++j)
        frame.vectors.push_back(fourier_truncate(
            [&](double s) { return cplx(scale * sqrt_partition(j, frame.arcs, overlap, s)); }, degree, samples));
    frame.tol = frame_check(frame).reconstruction_residual;
    return frame;
}

} // namespace detail

/*
 * Normalized tight frame psi_i = sqrt(N u_i) from a partition of unity
 * subordinate to M = N + 1 arcs of length (1 + overlap)/M. Each arc is shorter
 * than 1/N of the circle, so no arc holds two points of one fibre of z -> z^N
 * and the frame identities hold exactly before truncation. The profiles are
 * truncated to trigonometric polynomials; with degree > 0 that degree is used,
 * with degree == 0 the degree doubles from 32 until the measured residual is
 * within target_tol (or 4096 is reached). The residual is stored in frame.tol.
 */
inline TightFrame frame_from_partition(int n, double overlap, int degree = 0, double target_tol = 1e-3) {
    if (n < 2) throw Error(ErrorCode::BadInput, "branch count must be >= 2");
    const int arcs = n + 1;
    if (!(overlap > 0.0 && overlap < 1.0) || (1.0 + overlap) / arcs >= 1.0 / n)
        throw Error(ErrorCode::BadOverlap, "arcs of length (1+overlap)/" + std::to_string(arcs) +
                                               " must be shorter than 1/" + std::to_string(n));
    if (degree > 0) return detail::frame_at_degree(n, overlap, degree);
    TightFrame frame;
    for (int d = 32; d <= 4096; d *= 2) {
        frame = detail::frame_at_degree(n, overlap, d);
        if (frame.tol <= target_tol) break;
    }
    return frame;
}

} // namespace gwave

#endif // GWAVE_CORRESPONDENCE_HPP
