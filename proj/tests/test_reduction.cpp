#include <doctest.h>

#include "qstokes/reduction.hpp"
#include "test_util.hpp"

using namespace qstokes;
using namespace qstokes::testutil;

namespace {

CMat one_by_one(const Complex& v) {
    CMat m(1, 1);
    m(0, 0) = v;
    return m;
}

} // namespace

TEST_CASE("q_borel flattens the Tshakaloff coefficients") {
    const Complex q(2, 0);
    LaurentSeries ts = LaurentSeries::zero(0, 20);
    for (int n = 0; n <= 20; ++n) ts.at(n) = cpow_int(q, tri(n));
    auto b = q_borel(ts, 1, q);
    for (int n = 0; n <= 20; ++n) CHECK(rel_err(b.at(n), Complex(1)) < 1e-15);
    // level-d on the constant 1
    auto one = LaurentSeries::monomial(Complex(1), 0, 0, 8);
    for (int d : {1, 2, 3}) CHECK(q_borel(one, d, q).at(0) == Complex(1));
}

TEST_CASE("borel weights satisfy t_n = q^{n-d} t_{n-d}") {
    const Complex q(2, 0.3);
    for (int d : {1, 2, 3})
        for (int n = -9; n <= 12; ++n) {
            const Complex lhs = borel_weight(q, d, n);
            const Complex rhs = cpow_int(q, n - d) * borel_weight(q, d, n - d);
            CHECK(rel_err(lhs, rhs) < 1e-12);
        }
    // level 1 reduces to q^{n(n-1)/2}
    for (int n = -5; n <= 8; ++n)
        CHECK(rel_err(borel_weight(q, 1, n), cpow_int(q, tri(n))) < 1e-14);
}

TEST_CASE("shift equivalence (z-1) Bq f = Bq g for g = z sigma_q f - f") {
    const Complex q(2, 0);
    auto gen = rng(100);
    auto f = random_series(gen, 0, 24);
    auto gser = sub(sigma_q(f, 1, q).shifted(1).extended(0, 24).restricted(0, 24),
                    f.restricted(0, 24));
    auto bf = q_borel(f, 1, q);
    auto bg = q_borel(gser, 1, q);
    // (z - 1) Bq f
    LaurentSeries zminus1 = LaurentSeries::zero(0, 24);
    zminus1.at(0) = Complex(-1);
    zminus1.at(1) = Complex(1);
    auto lhs = mul(zminus1, bf);
    CHECK(max_abs_diff(lhs.restricted(1, 24), bg.restricted(1, 24)) < 1e-12);
}

TEST_CASE("two-slope invariant: constants and monomials") {
    const Complex q(2, 0);
    const Complex c(1.7, -0.2);
    SMat y(1, 1);
    y(0, 0) = LaurentSeries::monomial(Complex(0.8, 0.1), 0, 0, 30);
    auto inv0 = two_slope_invariant(y, one_by_one(c), q);
    CHECK(rel_err(inv0(0, 0), Complex(0.8, 0.1)) < 1e-13);

    const int k = 5;
    y(0, 0) = LaurentSeries::monomial(Complex(0.8, 0.1), k, 0, 30);
    auto invk = two_slope_invariant(y, one_by_one(c), q);
    const Complex want = Complex(0.8, 0.1) / (cpow_int(q, tri(k)) * cpow_int(c, k));
    CHECK(rel_err(invk(0, 0), want) < 1e-13);
}

TEST_CASE("invariant vanishes exactly when c z sigma f - f = u has an analytic solution") {
    const Complex q(2, 0);
    const Complex c(1.4, 0.2);
    auto gen = rng(101);
    // u := c z sigma f - f for a random analytic f: the class must vanish
    auto f = random_series(gen, 0, 36);
    auto u = sub(scale(sigma_q(f, 1, q).shifted(1), c).extended(0, 36).restricted(0, 36),
                 f.restricted(0, 36));
    SMat y(1, 1);
    y(0, 0) = u;
    auto inv = two_slope_invariant(y, one_by_one(c), q);
    CHECK(std::abs(inv(0, 0)) < 1e-10 * u.max_abs());
    // a generic u has a nonzero class
    y(0, 0) = random_series(gen, 0, 36);
    auto inv2 = two_slope_invariant(y, one_by_one(c), q);
    CHECK(std::abs(inv2(0, 0)) > 1e-6);
}

TEST_CASE("Red: scalar archetype matches the invariant") {
    const Complex q(2, 0);
    const Complex c(1.6, 0.3);
    auto gen = rng(102);
    SMat u(1, 1);
    u(0, 0) = random_series(gen, 0, 40);
    auto r = red(0, one_by_one(Complex(1)), 1, one_by_one(c), u, 40, q);
    // V is the constant Bq u(c^{-1}), which is the two-slope invariant with
    // the slope-1 block matrix acting on the left.
    auto inv = two_slope_invariant(u, one_by_one(c), q);
    Complex bu(0);
    for (int n = 0; n <= 40; ++n)
        bu += u(0, 0).at(n) / cpow_int(q, tri(n)) / cpow_int(c, n);
    CHECK(rel_err(inv(0, 0), bu) < 1e-12);
    CHECK(rel_err(r.V(0, 0).at(0), bu) < 1e-12);
    CHECK(r.V(0, 0).lo() == 0);
    CHECK(r.V(0, 0).hi() == 0);
    CHECK(red_residual(0, one_by_one(Complex(1)), 1, one_by_one(c), u, r, q) < 1e-11);
}

TEST_CASE("Red: U = 0 gives (0, 0)") {
    const Complex q(2, 0);
    SMat u = smat_zero(2, 1, 0, 30);
    CMat a1 = random_invertible(2, 7);
    CMat a2 = random_invertible(1, 8);
    auto r = red(0, a1, 2, a2, u, 30, q);
    CHECK(max_abs(r.F) == 0.0);
    CHECK(max_abs(r.V) == 0.0);
}

TEST_CASE("Red: defining relation, support, and dense oracle on random instances") {
    const Complex q(2, 0);
    auto gen = rng(103);
    std::uniform_int_distribution<int> rdist(1, 3);
    std::uniform_int_distribution<int> mudist(-2, 1);
    std::uniform_int_distribution<int> ddist(1, 3);
    for (int rep = 0; rep < 30; ++rep) {
        const int r1 = rdist(gen), r2 = rdist(gen);
        const int mu1 = mudist(gen);
        const int mu2 = mu1 + ddist(gen);
        const CMat a1 = random_invertible(r1, 500 + rep);
        const CMat a2 = random_invertible(r2, 900 + rep);
        const int order = 40;
        SMat u = random_smat(gen, r1, r2, std::min(mu1, -1), order);

        auto r = red(mu1, a1, mu2, a2, u, order, q);
        CHECK(red_residual(mu1, a1, mu2, a2, u, r, q) < 1e-9);
        // V support exactly in [mu1, mu2)
        for (const auto& e : r.V.data()) {
            CHECK(e.lo() == mu1);
            CHECK(e.hi() == mu2 - 1);
        }

        // dense linear-solve oracle agrees
        auto ro = red_dense_oracle(mu1, a1, mu2, a2, u, order, q);
        const Real scale = std::max(Real(1), max_abs(u));
        CHECK(max_abs_diff(r.V, ro.V) / scale < 1e-9);
        Real fdiff = 0;
        for (int i = 0; i < r1; ++i)
            for (int j = 0; j < r2; ++j)
                fdiff = std::max(fdiff,
                                 max_abs_diff(r.F(i, j).restricted(r.F(i, j).lo(), order - mu2),
                                              ro.F(i, j).restricted(r.F(i, j).lo(), order - mu2)));
        CHECK(fdiff / scale < 1e-9);
    }
}

TEST_CASE("Red is linear in U") {
    const Complex q(2, 0);
    auto gen = rng(104);
    const CMat a1 = random_invertible(2, 41);
    const CMat a2 = random_invertible(2, 42);
    const int order = 32;
    SMat u1 = random_smat(gen, 2, 2, 0, order);
    SMat u2 = random_smat(gen, 2, 2, 0, order);
    auto rs = red(0, a1, 2, a2, u1 + u2, order, q);
    auto ra = red(0, a1, 2, a2, u1, order, q);
    auto rb = red(0, a1, 2, a2, u2, order, q);
    const Real scale = std::max(max_abs(u1), max_abs(u2));
    CHECK(max_abs_diff(rs.V, ra.V + rb.V) / scale < 1e-10);
    Real fdiff = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            fdiff = std::max(fdiff, max_abs_diff(rs.F(i, j), add(ra.F(i, j), rb.F(i, j))));
    CHECK(fdiff / scale < 1e-10);
}

TEST_CASE("Red reports a sane condition number and errors") {
    const Complex q(2, 0);
    auto gen = rng(105);
    const CMat a1 = random_invertible(2, 51);
    const CMat a2 = random_invertible(2, 52);
    SMat u = random_smat(gen, 2, 2, 0, 20);
    auto r = red(0, a1, 1, a2, u, 20, q);
    CHECK(r.condition >= 1.0);
    CHECK(r.condition < 1e8);
    CHECK_THROWS_AS(red(0, a1, 1, a2, u, 30, q), OrderTooSmall);
    CHECK_THROWS_AS(red(1, a1, 1, a2, u, 10, q), NonIntegralSlopes);
}

TEST_CASE("two-slope invariant flags a window too narrow for its tail") {
    const Complex q(2, 0);
    // growing coefficients on a short window: the last Borel term stays large
    SMat y(1, 1);
    LaurentSeries f = LaurentSeries::zero(0, 4);
    for (int n = 0; n <= 4; ++n) f.at(n) = cpow_int(q, tri(n));
    y(0, 0) = f;
    CMat a(1, 1);
    a(0, 0) = Complex(1);
    CHECK_THROWS_AS(two_slope_invariant(y, a, q), TailNotNegligible);
}
