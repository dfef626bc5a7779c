#ifndef GWAVE_RANDOM_HPP
#define GWAVE_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "gwave/trig_poly.hpp"

namespace gwave {

using Rng = std::mt19937_64;

/// Complex standard normal coefficients on modes [-degree, degree].
inline TrigPoly random_trig_poly(Rng& rng, int degree) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<cplx> c(static_cast<std::size_t>(2 * degree + 1));
    for (auto& x : c) x = {normal(rng), normal(rng)};
    return TrigPoly(-degree, std::move(c));
}

/// Random coefficients on an explicit mode window [lo, hi].
inline TrigPoly random_trig_poly(Rng& rng, int lo, int hi) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<cplx> c(static_cast<std::size_t>(hi - lo + 1));
    for (auto& x : c) x = {normal(rng), normal(rng)};
    return TrigPoly(lo, std::move(c));
}

/*
 * Random unit vector of the N = 2 correspondence, <m, m> = 1 exactly.
 *
 * Builds the polyphase pair (e, o), m(z) = e(z^2) + z o(z^2), from
 * alternating rotations and diag(1, x) delays, which keep |e|^2 + |o|^2 = 1
 * on the circle. One rotation by pi/4 gives the Haar filter. The result is
 * then modulated by a unimodular constant and a monomial z^{2k}, i.e. by
 * theta(z^2) with theta = c x^k.
 */
inline TrigPoly random_unit_filter(Rng& rng, int stages = 2, int max_shift = 2) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::uniform_int_distribution<int> shift(-max_shift, max_shift);
    TrigPoly even = TrigPoly::constant(1.0);
    TrigPoly odd;
    for (int s = 0; s < stages; ++s) {
        if (s > 0) odd = odd.shift(1);
        const double a = angle(rng);
        const double c = std::cos(a), sn = std::sin(a);
        TrigPoly e2 = even * c - odd * sn;
        TrigPoly o2 = even * sn + odd * c;
        even = std::move(e2);
        odd = std::move(o2);
    }
    const cplx phase = std::polar(1.0, angle(rng));
    const TrigPoly m = even.dilate(2) + odd.dilate(2).shift(1);
    return (m * phase).shift(2 * shift(rng));
}

} // namespace gwave

#endif // GWAVE_RANDOM_HPP
