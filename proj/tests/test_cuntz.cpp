#include <catch_amalgamated.hpp>

#include <numbers>

#include "gwave/cuntz.hpp"

using namespace gwave;

namespace {

const double r2 = std::numbers::sqrt2;

FilterBank haar_bank() { return {2, {haar_lowpass(), haar_complete(haar_lowpass())}}; }

double worst(const std::vector<std::vector<double>>& m) {
    double w = 0.0;
    for (const auto& row : m)
        for (double v : row) w = std::max(w, v);
    return w;
}

} // namespace

TEST_CASE("apply_S closed forms") {
    const CuntzOperator s1{haar_lowpass(), 2};
    CHECK(max_distance(apply_S(s1, TrigPoly::constant(1.0)), haar_lowpass()) == 0.0);
    for (int n : {2, 3}) {
        const CuntzOperator id{TrigPoly::constant(1.0), n};
        CHECK(max_distance(apply_S(id, TrigPoly::monomial(5)), TrigPoly::monomial(5 * n)) == 0.0);
    }
    const CuntzOperator s2{haar_complete(haar_lowpass()), 2};
    CHECK(max_distance(apply_S(s2, TrigPoly::monomial(1)), TrigPoly(2, {-1.0 / r2, 1.0 / r2})) < 1e-16);
}

TEST_CASE("apply_S_adjoint closed forms") {
    const CuntzOperator s1{haar_lowpass(), 2};
    CHECK(max_distance(apply_S_adjoint(s1, TrigPoly::monomial(1)), TrigPoly::constant(1.0 / r2)) < 1e-16);
    const CuntzOperator id{TrigPoly::constant(1.0), 3};
    CHECK(max_distance(apply_S_adjoint(id, TrigPoly::monomial(6)), TrigPoly::monomial(2)) == 0.0);
    CHECK(apply_S_adjoint(id, TrigPoly::monomial(7)).is_zero());
}

TEST_CASE("adjoint consistency in L2") {
    Rng rng(31);
    for (int t = 0; t < 50; ++t) {
        const CuntzOperator op{random_trig_poly(rng, -2, 5), 2 + t % 3};
        const TrigPoly xi = random_trig_poly(rng, 6);
        const TrigPoly eta = random_trig_poly(rng, 15);
        const cplx lhs = l2_inner(apply_S(op, xi), eta);
        const cplx rhs = l2_inner(xi, apply_S_adjoint(op, eta));
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
    }
}

TEST_CASE("isometry and range orthogonality for random banks") {
    Rng rng(32);
    for (int t = 0; t < 30; ++t) {
        const TrigPoly m1 = random_unit_filter(rng, 3);
        const FilterBank bank{2, {m1, haar_complete(m1)}};
        const TrigPoly xi = random_trig_poly(rng, 9);
        const TrigPoly eta = random_trig_poly(rng, 9);
        for (std::size_t i = 0; i < 2; ++i) {
            const CuntzOperator si{bank.filters[i], 2};
            CHECK(std::abs(apply_S(si, xi).norm() - xi.norm()) <= 1e-12 * xi.norm());
            CHECK(l2_distance(apply_S_adjoint(si, apply_S(si, xi)), xi) <= 1e-12 * xi.norm());
            for (std::size_t j = 0; j < 2; ++j) {
                const CuntzOperator sj{bank.filters[j], 2};
                const cplx expect = i == j ? l2_inner(xi, eta) : cplx(0.0);
                CHECK(std::abs(l2_inner(apply_S(si, xi), apply_S(sj, eta)) - expect) <= 1e-11);
            }
        }
    }
}

TEST_CASE("verify_cuntz on the Haar bank") {
    const CuntzReport rep = verify_cuntz(haar_bank(), 100, 10);
    CHECK(rep.ok);
    CHECK(worst(rep.isometry_abs) <= 1e-12);
    CHECK(rep.completeness_abs <= 1e-12);
    CHECK(rep.seed == 20240601);

    // single vector z^5
    const auto bank = haar_bank();
    TrigPoly sum;
    const TrigPoly xi = TrigPoly::monomial(5);
    for (const auto& f : bank.filters) sum += apply_S({f, 2}, apply_S_adjoint({f, 2}, xi));
    CHECK(l2_distance(sum, xi) <= 1e-12);
}

TEST_CASE("verify_cuntz on the monomial bank is exact") {
    const CuntzReport rep = verify_cuntz({2, {TrigPoly::constant(1.0), TrigPoly::monomial(1)}}, 20, 12);
    CHECK(worst(rep.isometry_abs) == 0.0);
    CHECK(rep.completeness_abs == 0.0);
}

TEST_CASE("verify_cuntz on Daubechies-4 and N = 3 monomials") {
    const TrigPoly d4 = daubechies4_lowpass();
    CHECK(verify_cuntz({2, {d4, haar_complete(d4)}}, 50, 10).ok);
    const FilterBank b3{3, {TrigPoly::constant(1.0), TrigPoly::monomial(1), TrigPoly::monomial(-1)}};
    CHECK(verify_cuntz(b3, 20, 10).ok);
}

TEST_CASE("cuntz residuals expose a non-isometry") {
    const CuntzReport rep = cuntz_residuals({TrigPoly(0, {1.0, 1.0})}, 2, 20, 10);
    CHECK_FALSE(rep.ok);
    CHECK(rep.isometry_rel[0][0] == Catch::Approx(1.0).epsilon(1e-12));

    try {
        verify_cuntz({2, {haar_lowpass(), haar_lowpass()}}, 1, 1);
        FAIL("expected NOT_A_BANK");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotABank);
    }
}

TEST_CASE("reports are reproducible for a fixed seed") {
    const auto a = verify_cuntz(haar_bank(), 10, 6, 1e-12, 77);
    const auto b = verify_cuntz(haar_bank(), 10, 6, 1e-12, 77);
    CHECK(a.isometry_abs == b.isometry_abs);
    CHECK(a.completeness_abs == b.completeness_abs);
}

TEST_CASE("covariance identities") {
    const auto bank = haar_bank();
    const auto simple = covariance_check(TrigPoly::monomial(1), bank, TrigPoly::constant(1.0));
    CHECK(simple.ok);
    CHECK(simple.inner == 0.0);
    for (double r : simple.intertwining) CHECK(r == 0.0);

    const auto unit = covariance_check(TrigPoly::constant(1.0), bank, TrigPoly::monomial(3));
    CHECK(unit.ok);

    Rng rng(33);
    for (int t = 0; t < 20; ++t) {
        const TrigPoly a = random_trig_poly(rng, 6);
        const TrigPoly xi = random_trig_poly(rng, 8);
        const auto rep = covariance_check(a, bank, xi);
        CHECK(rep.ok);
        CHECK(rep.inner <= 1e-12 * a.norm() * xi.norm() * 10);
    }
}

TEST_CASE("product_S_power") {
    CHECK(max_distance(product_S_power(haar_lowpass(), 0), TrigPoly::constant(1.0)) == 0.0);
    const TrigPoly expect = TrigPoly(0, {1.0, 1.0}) * TrigPoly(0, {1.0, 0.0, 1.0}) * 0.5;
    CHECK(max_distance(product_S_power(haar_lowpass(), 2), expect) < 1e-15);

    Rng rng(34);
    const TrigPoly m1 = daubechies4_lowpass();
    const TrigPoly xi = random_trig_poly(rng, 5);
    TrigPoly iterated = xi;
    for (int k = 1; k <= 5; ++k) {
        iterated = apply_S({m1, 2}, iterated);
        const TrigPoly closed = product_S_power(m1, k) * xi.dilate(1 << k);
        CHECK(l2_distance(iterated, closed) <= 1e-12 * xi.norm());
    }
    CHECK_THROWS_AS(product_S_power(m1, -1), Error);
}
