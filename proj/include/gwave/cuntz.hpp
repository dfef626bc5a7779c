#ifndef GWAVE_CUNTZ_HPP
#define GWAVE_CUNTZ_HPP

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <vector>

#include "gwave/correspondence.hpp"
#include "gwave/error.hpp"
#include "gwave/random.hpp"
#include "gwave/trig_poly.hpp"

namespace gwave {

/// (S xi)(z) = m(z) xi(z^N) on trigonometric polynomials.
struct CuntzOperator {
    TrigPoly filter;
    int branch_count = 2;
};

inline TrigPoly apply_S(const CuntzOperator& op, const TrigPoly& xi) {
    TrigPoly out = op.filter * xi.dilate(op.branch_count);
    assert(out.is_zero() || (out.kmin() >= op.branch_count * xi.kmin() + op.filter.kmin() &&
                             out.kmax() <= op.branch_count * xi.kmax() + op.filter.kmax()));
    return out;
}

/// (S* eta)(x) = (1/N) sum_{w^N = x} conj(m(w)) eta(w): the N-divisible part of conj(m) eta.
inline TrigPoly apply_S_adjoint(const CuntzOperator& op, const TrigPoly& eta) {
    return (op.filter.conj() * eta).decimate(op.branch_count);
}

struct CuntzReport {
    std::uint64_t seed = 0;
    int trials = 0;
    int max_degree = 0;
    double tol = 0.0;
    // worst ||S_i* S_j xi - delta_ij xi||, absolute and relative to ||xi||
    std::vector<std::vector<double>> isometry_abs;
    std::vector<std::vector<double>> isometry_rel;
    double completeness_abs = 0.0;  // worst ||sum_i S_i S_i* xi - xi||
    double completeness_rel = 0.0;
    bool ok = false;
};

/// Residuals of the Cuntz relations for an arbitrary filter family on random
/// test vectors; no precondition on the family.
inline CuntzReport cuntz_residuals(const std::vector<TrigPoly>& filters, int n, int trials, int max_degree,
                                   double tol = 1e-12, std::uint64_t seed = 20240601) {
    CuntzReport rep;
    rep.seed = seed;
    rep.trials = trials;
    rep.max_degree = max_degree;
    rep.tol = tol;
    const std::size_t count = filters.size();
    rep.isometry_abs.assign(count, std::vector<double>(count, 0.0));
    rep.isometry_rel = rep.isometry_abs;
    std::vector<CuntzOperator> ops;
    for (const auto& f : filters) ops.push_back({f, n});
    Rng rng(seed);
    for (int t = 0; t < trials; ++t) {
        const TrigPoly xi = random_trig_poly(rng, max_degree);
        const double scale = xi.norm();
        std::vector<TrigPoly> images;
        for (const auto& op : ops) images.push_back(apply_S(op, xi));
        TrigPoly range_sum;
        for (std::size_t i = 0; i < count; ++i) {
            for (std::size_t j = 0; j < count; ++j) {
                TrigPoly r = apply_S_adjoint(ops[i], images[j]);
                if (i == j) r -= xi;
                const double a = r.norm();
                rep.isometry_abs[i][j] = std::max(rep.isometry_abs[i][j], a);
                rep.isometry_rel[i][j] = std::max(rep.isometry_rel[i][j], a / scale);
            }
            range_sum += apply_S(ops[i], apply_S_adjoint(ops[i], xi));
        }
        const double c = l2_distance(range_sum, xi);
        rep.completeness_abs = std::max(rep.completeness_abs, c);
        rep.completeness_rel = std::max(rep.completeness_rel, c / scale);
    }
    double worst = rep.completeness_abs;
    for (const auto& row : rep.isometry_abs) worst = std::max(worst, *std::max_element(row.begin(), row.end()));
    rep.ok = worst <= tol;
    return rep;
}

/// S_i* S_j = delta_ij and sum_i S_i S_i* = 1 for a filter bank.
inline CuntzReport verify_cuntz(const FilterBank& bank, int trials, int max_degree, double tol = 1e-12,
                                std::uint64_t seed = 20240601) {
    if (!is_filter_bank(bank).ok) throw Error(ErrorCode::NotABank, "filters do not form a filter bank");
    return cuntz_residuals(bank.filters, bank.branch_count, trials, max_degree, tol, seed);
}

struct CovarianceReport {
    std::vector<double> intertwining;  // per i: ||(a o T)(S_i xi) - S_i(a xi)||
    double inner = 0.0;                // ||(a o T) xi - sum_i S_i(a S_i* xi)||
    double tol = 0.0;
    bool ok = false;
};

/// beta(a) S_i = S_i a and beta(a) = sum_i S_i a S_i*, with beta(a) = a o T.
inline CovarianceReport covariance_check(const TrigPoly& a, const FilterBank& bank, const TrigPoly& xi,
                                         double tol = 1e-12) {
    if (!is_filter_bank(bank).ok) throw Error(ErrorCode::NotABank, "filters do not form a filter bank");
    CovarianceReport rep;
    rep.tol = tol;
    const int n = bank.branch_count;
    const TrigPoly beta_a = a.dilate(n);
    TrigPoly sum;
    double worst = 0.0;
    for (const auto& f : bank.filters) {
        const CuntzOperator op{f, n};
        const double r = l2_distance(beta_a * apply_S(op, xi), apply_S(op, a * xi));
        rep.intertwining.push_back(r);
        worst = std::max(worst, r);
        sum += apply_S(op, a * apply_S_adjoint(op, xi));
    }
    rep.inner = l2_distance(beta_a * xi, sum);
    rep.ok = std::max(worst, rep.inner) <= tol;
    return rep;
}

/// Multiplier M_k(z) = prod_{j<k} m(z^{N^j}), so that S^k xi = M_k . (xi o z^{N^k}).
/// With m in correspondence normalization this already carries the N^{k/2} factor
/// of the Mallat-normalized product.
inline TrigPoly product_S_power(const TrigPoly& m1, int k, int n = 2) {
    if (k < 0) throw Error(ErrorCode::BadInput, "power must be nonnegative");
    TrigPoly out = TrigPoly::constant(1.0);
    int scale = 1;
    for (int j = 0; j < k; ++j) {
        out *= m1.dilate(scale);
        scale *= n;
    }
    return out;
}

} // namespace gwave

#endif // GWAVE_CUNTZ_HPP
