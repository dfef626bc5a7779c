#include <catch_amalgamated.hpp>

#include <numbers>

#include "gwave/correspondence.hpp"
#include "gwave/random.hpp"

using namespace gwave;

namespace {

const double r2 = std::numbers::sqrt2;

// <xi, eta>(x) evaluated as the average over the N preimages of x.
cplx inner_by_roots(const TrigPoly& xi, const TrigPoly& eta, int n, double s) {
    cplx acc = 0.0;
    for (int r = 0; r < n; ++r) {
        const double y = (s + r) / n;
        acc += std::conj(xi.at(y)) * eta.at(y);
    }
    return acc / static_cast<double>(n);
}

double inner_oracle_gap(const TrigPoly& xi, const TrigPoly& eta, int n) {
    const TrigPoly p = corr_inner(xi, eta, n);
    double worst = 0.0;
    for (int i = 0; i < 64; ++i) {
        const double s = static_cast<double>(i) / 64;
        worst = std::max(worst, std::abs(p.at(s) - inner_by_roots(xi, eta, n, s)));
    }
    return worst;
}

TrigPoly haar_high() { return TrigPoly(0, {-1.0 / r2, 1.0 / r2}); }

} // namespace

TEST_CASE("corr_inner on the Haar pair") {
    const TrigPoly one = TrigPoly::constant(1.0);
    CHECK(max_distance(corr_inner(one, one, 2), one) == 0.0);
    CHECK(max_distance(corr_inner(haar_lowpass(), haar_lowpass(), 2), one) < 1e-15);
    CHECK(corr_inner(haar_lowpass(), haar_high(), 2).max_abs() < 1e-15);
    CHECK(inner_oracle_gap(haar_lowpass(), haar_lowpass(), 2) < 1e-14);
    CHECK(inner_oracle_gap(haar_lowpass(), haar_high(), 2) < 1e-14);
    CHECK_THROWS_MATCHES(corr_inner(one, one, 1), Error, Catch::Matchers::Message("BAD_INPUT: branch count must be >= 2"));
}

TEST_CASE("corr_inner matches the root-average oracle on random input") {
    Rng rng(21);
    for (int n : {2, 3, 4}) {
        for (int t = 0; t < 10; ++t) {
            const TrigPoly xi = random_trig_poly(rng, 8);
            const TrigPoly eta = random_trig_poly(rng, -3, 12);
            CHECK(inner_oracle_gap(xi, eta, n) < 1e-11);
        }
    }
}

TEST_CASE("corr_inner sesquilinearity and positivity") {
    Rng rng(22);
    const cplx c(0.3, -1.7);
    for (int t = 0; t < 20; ++t) {
        const TrigPoly xi = random_trig_poly(rng, 20);
        const TrigPoly eta = random_trig_poly(rng, 20);
        const TrigPoly zeta = random_trig_poly(rng, 20);
        CHECK(max_distance(corr_inner(xi * c + zeta, eta, 2), corr_inner(xi, eta, 2) * std::conj(c) + corr_inner(zeta, eta, 2)) < 1e-11);
        CHECK(max_distance(corr_inner(xi, eta * c + zeta, 2), corr_inner(xi, eta, 2) * c + corr_inner(xi, zeta, 2)) < 1e-11);
        const TrigPoly self = corr_inner(xi, xi, 3);
        for (int i = 0; i < 50; ++i) {
            const cplx v = self.at(i / 50.0);
            CHECK(std::abs(v.imag()) < 1e-10);
            CHECK(v.real() >= -1e-12);
        }
    }
}

TEST_CASE("bimodule identities") {
    Rng rng(23);
    for (int t = 0; t < 20; ++t) {
        const TrigPoly xi = random_trig_poly(rng, 7);
        const TrigPoly eta = random_trig_poly(rng, 9);
        const TrigPoly a = random_trig_poly(rng, 4);
        for (int n : {2, 3}) {
            CHECK(max_distance(corr_inner(xi, right_act(eta, a, n), n), corr_inner(xi, eta, n) * a) < 1e-10);
            CHECK(max_distance(corr_inner(a * xi, eta, n), corr_inner(xi, a.conj() * eta, n)) < 1e-10);
        }
    }
}

TEST_CASE("is_unit_filter") {
    auto r = is_unit_filter(TrigPoly::constant(1.0), 2);
    CHECK(r.ok);
    CHECK(r.residual == 0.0);
    r = is_unit_filter(haar_lowpass(), 2);
    CHECK(r.ok);
    CHECK(r.residual <= 1e-12);
    r = is_unit_filter(TrigPoly(0, {1.0, 1.0}), 2);
    CHECK_FALSE(r.ok);
    CHECK(r.residual == Catch::Approx(1.0));
    CHECK(is_unit_filter(daubechies4_lowpass(), 2).residual <= 1e-15);
}

TEST_CASE("is_filter_bank verdicts") {
    CHECK(is_filter_bank({2, {haar_lowpass(), haar_high()}}).ok);
    const auto mono = is_filter_bank({2, {TrigPoly::constant(1.0), TrigPoly::monomial(1)}});
    CHECK(mono.ok);
    CHECK(mono.max_residual == 0.0);
    CHECK(mono.reconstruction_residual == 0.0);
    // conj(1 + z)(1 - z)/2 = (z^{-1} - z)/2 has no even modes, so the pair is orthogonal
    const auto flipped = is_filter_bank({2, {haar_lowpass(), TrigPoly(0, {1.0 / r2, -1.0 / r2})}});
    CHECK(flipped.ok);
    CHECK(inner_oracle_gap(haar_lowpass(), TrigPoly(0, {1.0 / r2, -1.0 / r2}), 2) < 1e-14);

    const auto bad = is_filter_bank({2, {haar_lowpass(), haar_lowpass()}});
    CHECK_FALSE(bad.ok);
    CHECK_FALSE(bad.orthonormal);
    CHECK(bad.residuals[0][1] == Catch::Approx(1.0));

    // orthonormal but not spanning: two vectors for N = 3
    const auto short_bank = FilterBank{3, {TrigPoly::constant(1.0), TrigPoly::monomial(1)}};
    CHECK_THROWS_AS(is_filter_bank(short_bank), Error);
    try {
        is_filter_bank(short_bank);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::CountMismatch);
    }
}

TEST_CASE("haar_complete closed forms") {
    CHECK(max_distance(haar_complete(haar_lowpass()), haar_high()) < 1e-15);
    for (int k : {-3, 0, 1, 4}) {
        const TrigPoly m2 = haar_complete(TrigPoly::monomial(k));
        CHECK(max_distance(m2, TrigPoly::monomial(1 - k, (k % 2 == 0) ? 1.0 : -1.0)) == 0.0);
        CHECK(is_filter_bank({2, {TrigPoly::monomial(k), m2}}).ok);
    }
    const TrigPoly d4 = daubechies4_lowpass();
    const auto rep = is_filter_bank({2, {d4, haar_complete(d4)}});
    CHECK(rep.ok);
    CHECK(rep.max_residual <= 1e-12);
    CHECK(rep.reconstruction_residual <= 1e-12);

    try {
        haar_complete(TrigPoly(0, {1.0, 1.0}));
        FAIL("expected NOT_UNIT");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotUnit);
    }
}

TEST_CASE("haar_complete turns random unit filters into banks") {
    Rng rng(24);
    for (int t = 0; t < 200; ++t) {
        const TrigPoly m1 = random_unit_filter(rng, 1 + t % 4);
        REQUIRE(is_unit_filter(m1, 2).ok);
        const auto rep = is_filter_bank({2, {m1, haar_complete(m1)}});
        CHECK(rep.ok);
    }
}

TEST_CASE("modulate_highpass") {
    const TrigPoly m2 = haar_high();
    CHECK(max_distance(modulate_highpass(m2, TrigPoly::constant(1.0)), m2) == 0.0);
    const TrigPoly z = modulate_highpass(m2, TrigPoly::monomial(1));
    CHECK(max_distance(z, TrigPoly(2, {-1.0 / r2, 1.0 / r2})) < 1e-15);
    CHECK(is_filter_bank({2, {haar_lowpass(), z}}).ok);
    const TrigPoly neg = modulate_highpass(m2, TrigPoly::constant(-1.0));
    CHECK(max_distance(neg, m2 * -1.0) == 0.0);
    CHECK(is_filter_bank({2, {haar_lowpass(), neg}}).ok);

    // (z + z^{-1})/2 = cos(2 pi s)
    try {
        modulate_highpass(m2, TrigPoly(-1, {0.5, 0.0, 0.5}));
        FAIL("expected NOT_UNIMODULAR");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotUnimodular);
    }

    Rng rng(25);
    for (int t = 0; t < 50; ++t) {
        const TrigPoly m1 = random_unit_filter(rng, 3);
        const TrigPoly theta = TrigPoly::monomial(t % 7 - 3, std::polar(1.0, 0.1 * t));
        CHECK(is_filter_bank({2, {m1, modulate_highpass(haar_complete(m1), theta)}}).ok);
    }
}

TEST_CASE("partition-of-unity frames") {
    for (auto [n, overlap] : {std::pair{2, 0.1}, std::pair{3, 0.05}}) {
        const TightFrame f = frame_from_partition(n, overlap);
        CHECK(f.arcs == n + 1);
        CHECK(f.tol <= 1e-3);
        const FrameReport rep = frame_check(f, 8);
        CHECK(rep.reconstruction_residual <= 1e-3);
        CHECK(rep.frame_equality_residual <= 1e-3);
        CHECK(bank_reconstruct(f.vectors, n, TrigPoly()).is_zero());
    }
    const TightFrame f2 = frame_from_partition(2, 0.1);
    const TrigPoly z3 = TrigPoly::monomial(3);
    CHECK(max_distance(bank_reconstruct(f2.vectors, 2, z3), z3) <= 1e-3);
    const TightFrame f3 = frame_from_partition(3, 0.05);
    const TrigPoly one = TrigPoly::constant(1.0);
    CHECK(max_distance(bank_reconstruct(f3.vectors, 3, one), one) <= 1e-3);
}

TEST_CASE("frame truncation error shrinks with degree") {
    const double r32 = frame_from_partition(2, 0.1, 32).tol;
    const double r64 = frame_from_partition(2, 0.1, 64).tol;
    const double r128 = frame_from_partition(2, 0.1, 128).tol;
    CHECK(r64 < r32);
    CHECK(r128 < r64);
}

TEST_CASE("frame profiles form an exact partition before truncation") {
    for (int n : {2, 3}) {
        const int arcs = n + 1;
        for (int i = 0; i < 200; ++i) {
            const double s = i / 200.0;
            double sum = 0.0;
            for (int j = 0; j < arcs; ++j) sum += std::pow(detail::sqrt_partition(j, arcs, 0.1, s), 2);
            CHECK(sum == Catch::Approx(1.0).margin(1e-14));
        }
    }
}

TEST_CASE("frame overlap validation") {
    for (double ov : {0.0, 1.0, -0.1, 0.6}) {
        try {
            frame_from_partition(2, ov);
            FAIL("expected BAD_OVERLAP");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::BadOverlap);
        }
    }
}
