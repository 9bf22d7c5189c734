#include "qstokes/stokes.hpp"

#include <climits>

#include <algorithm>
#include <cmath>

namespace qstokes {

namespace {

int common_lo(const SMat& a) {
    int lo = INT_MAX;
    for (const auto& e : a.data()) lo = std::min(lo, e.lo());
    return lo;
}

} // namespace

int Cocycle::rank() const {
    int n = 0;
    for (int r : ranks) n += r;
    return n;
}

CMat Cocycle::eval(const Complex& z) const {
    const int n = rank();
    CMat f = CMat::identity(n);
    std::vector<int> off(ranks.size() + 1, 0);
    for (size_t k = 0; k < ranks.size(); ++k) off[k + 1] = off[k] + ranks[k];
    for (const auto& [ij, blk] : blocks) {
        const auto [bi, bj] = ij;
        const CMat v = blk.eval(z, q);
        for (int i = 0; i < v.rows(); ++i)
            for (int j = 0; j < v.cols(); ++j)
                f(off[static_cast<size_t>(bi)] + i, off[static_cast<size_t>(bj)] + j) = v(i, j);
    }
    return f;
}

Real Cocycle::automorphism_residual(const BlockModule& m, const Complex& z) const {
    const CMat fz = eval(z);
    const CMat fqz = eval(m.q * z);
    const int n = m.rank();
    CMat a0(n, n);
    for (int b = 0; b < m.block_count(); ++b) {
        const auto& blk = m.blocks[static_cast<size_t>(b)];
        const int off = m.block_offset(b);
        const Complex zm = cpow_int(z, blk.mu);
        for (int i = 0; i < blk.rank(); ++i)
            for (int j = 0; j < blk.rank(); ++j) a0(off + i, off + j) = zm * blk.A(i, j);
    }
    const CMat lhs = fqz * a0;
    const CMat rhs = a0 * fz;
    return max_abs(lhs - rhs) / std::max({Real(1), max_abs(lhs), max_abs(rhs)});
}

Cocycle stokes_cocycle(const BlockModule& m, const Direction& c, const Direction& d,
                       int window) {
    m.validate();
    const Complex q = m.q;
    if (c.same_class(d, q)) throw DirectionsEqual("stokes_cocycle(): c and d coincide on E_q");
    const MeromorphicSum fc = algebraic_sum(m, c, window);
    const MeromorphicSum fd = algebraic_sum(m, d, window);

    const int k = m.block_count();
    const int wext = window + 8;
    const int mu_span = m.blocks.back().mu - m.blocks.front().mu;

    // theta power tables for the two pole spirals
    auto build_powers = [&](const Complex& lambda) {
        std::vector<LaurentSeries> p(static_cast<size_t>(mu_span + 1));
        p[0] = LaurentSeries::monomial(Complex(1), 0, -wext, wext);
        if (mu_span >= 1) p[1] = theta_series(ThetaKind::make_shifted(lambda), q, -wext, wext);
        for (int t = 2; t <= mu_span; ++t)
            p[static_cast<size_t>(t)] = mul_onto(p[static_cast<size_t>(t - 1)], p[1], -wext, wext);
        return p;
    };
    const auto thc = build_powers(c.c);
    const auto thd = build_powers(d.c);

    auto delta = [&](int i, int j) {
        return m.blocks[static_cast<size_t>(j)].mu - m.blocks[static_cast<size_t>(i)].mu;
    };
    auto numerator_of = [&](const MeromorphicSum& f, int i, int j) -> const SMat& {
        return f.blocks.at({i, j}).num;
    };
    auto lift = [&](const SMat& num, int pow_c, int pow_d) {
        SMat r = num;
        for (auto& e : r.data()) {
            if (pow_c > 0) e = mul_onto(e, thc[static_cast<size_t>(pow_c)], -wext, wext);
            if (pow_d > 0) e = mul_onto(e, thd[static_cast<size_t>(pow_d)], -wext, wext);
        }
        return r;
    };

    // Unipotent inverse of F_c block by block: inv(i,j) over theta_c^{delta_ij}.
    std::map<std::pair<int, int>, SMat> inv;
    for (int span = 1; span < k; ++span)
        for (int i = 0; i + span < k; ++i) {
            const int j = i + span;
            SMat acc = smat_zero(m.blocks[static_cast<size_t>(i)].rank(),
                                 m.blocks[static_cast<size_t>(j)].rank(), -wext, wext);
            if (fc.blocks.count({i, j}))
                acc = acc - extended(numerator_of(fc, i, j), -wext, wext);
            for (int l = i + 1; l < j; ++l)
                if (fc.blocks.count({i, l}) && inv.count({l, j}))
                    acc = acc - mul_onto(numerator_of(fc, i, l), inv.at({l, j}), -wext, wext);
            inv.emplace(std::pair<int, int>{i, j}, std::move(acc));
        }

    Cocycle out;
    out.q = q;
    out.c = c;
    out.d = d;
    out.ranks = fc.ranks;
    out.mus = fc.mus;
    for (int span = 1; span < k; ++span)
        for (int i = 0; i + span < k; ++i) {
            const int j = i + span;
            const int dij = delta(i, j);
            SMat acc = smat_zero(m.blocks[static_cast<size_t>(i)].rank(),
                                 m.blocks[static_cast<size_t>(j)].rank(), -wext, wext);
            if (inv.count({i, j})) acc = acc + lift(inv.at({i, j}), 0, dij);
            if (fd.blocks.count({i, j})) acc = acc + lift(numerator_of(fd, i, j), dij, 0);
            for (int l = i + 1; l < j; ++l)
                if (inv.count({i, l}) && fd.blocks.count({l, j})) {
                    const SMat mixed = mul_onto(inv.at({i, l}), numerator_of(fd, l, j), -wext, wext);
                    acc = acc + lift(mixed, delta(l, j), delta(i, l));
                }
            MeromorphicBlock blk;
            blk.num = std::move(acc);
            blk.denom.push_back({c.c, dij});
            blk.denom.push_back({d.c, dij});
            out.blocks[{i, j}] = std::move(blk);
        }
    return out;
}

Complex rank2_elliptic_formula(const Complex& lambda, const Complex& mu, const Complex& z,
                               const Complex& q) {
    const Complex cube = pochhammer_inf(Complex(1) / q, Complex(1) / q);
    const Complex C = cube * cube * cube;
    const Complex den[4] = {theta_q(-Complex(1) / lambda, q), theta_q(-Complex(1) / mu, q),
                            theta_q(lambda / z, q), theta_q(z / mu, q)};
    for (const auto& t : den)
        if (std::abs(t) < Real(1e-250)) throw PoleHit("rank2_elliptic_formula(): denominator zero");
    return C * theta_q(-lambda / mu, q) * theta_q(z / (lambda * mu), q) /
           (den[0] * den[1] * den[2] * den[3]);
}

int privileged_space_dimension(const PureBlock& bi, const PureBlock& bj, const Direction& c,
                               const Direction& d, const Complex& q, int probe_order) {
    if (c.same_class(d, q))
        throw DirectionsEqual("privileged_space_dimension(): directions coincide");
    const int delta = bj.mu - bi.mu;
    if (delta == 0) return 0;
    if (delta < 0) throw WrongShape("privileged_space_dimension(): needs mu_i <= mu_j");
    const int ri = bi.rank(), rj = bj.rank();
    const Complex a = -c.c, b = -d.c;
    const Complex ab_pow = cpow_int(a * b, delta);
    const CMat aj_inv = inverse(bj.A);

    // Y_n = q^{-n} (ab)^{-delta} A_i Y_{n-delta} A_j^{-1}; the map from the
    // free block Y_0..Y_{delta-1} to the probe coefficients.
    const int bs = ri * rj;
    probe_order = std::max(probe_order, delta);
    CMat map(probe_order * bs, delta * bs);
    for (int col_block = 0; col_block < delta; ++col_block)
        for (int jj = 0; jj < rj; ++jj)
            for (int ii = 0; ii < ri; ++ii) {
                const int col = col_block * bs + jj * ri + ii;
                CMat y(ri, rj);
                y(ii, jj) = Complex(1);
                for (int n = col_block; n < probe_order; n += delta) {
                    if (n != col_block)
                        y = (cpow_int(q, -n) / ab_pow) * (bi.A * y * aj_inv);
                    for (int j2 = 0; j2 < rj; ++j2)
                        for (int i2 = 0; i2 < ri; ++i2)
                            map(n * bs + j2 * ri + i2, col) = y(i2, j2);
                }
            }
    return numeric_rank(map, Real(1e-8));
}

std::map<int, std::vector<CMat>> devissage_coordinates(const BlockModule& m) {
    m.validate();
    std::map<int, std::vector<CMat>> levels;
    for (const auto& [ij, u] : m.U) {
        const auto [bi, bj] = ij;
        const int mu_i = m.blocks[static_cast<size_t>(bi)].mu;
        const int mu_j = m.blocks[static_cast<size_t>(bj)].mu;
        auto& bucket = levels[mu_j - mu_i];
        for (int e = mu_i; e < mu_j; ++e) {
            CMat coef(u.rows(), u.cols());
            for (int i = 0; i < u.rows(); ++i)
                for (int j = 0; j < u.cols(); ++j) coef(i, j) = u(i, j).coeff(e);
            bucket.push_back(std::move(coef));
        }
    }
    return levels;
}

BlockModule symmetric_square(const BlockModule& m) {
    if (m.block_count() != 2 || m.blocks[0].rank() != 1 || m.blocks[1].rank() != 1)
        throw WrongShape("symmetric_square(): expects a two-block rank-(1,1) module");
    const Complex a = m.blocks[0].A(0, 0);
    const Complex b = m.blocks[1].A(0, 0);
    const int mu = m.blocks[0].mu, nu = m.blocks[1].mu;

    BlockModule s;
    s.q = m.q;
    auto one_by_one = [](const Complex& v) {
        CMat mm(1, 1);
        mm(0, 0) = v;
        return mm;
    };
    s.blocks.push_back({2 * mu, one_by_one(a * a)});
    s.blocks.push_back({mu + nu, one_by_one(a * b)});
    s.blocks.push_back({2 * nu, one_by_one(b * b)});
    if (m.has_u(0, 1)) {
        const LaurentSeries& u = m.u(0, 1)(0, 0);
        SMat u12(1, 1), u13(1, 1), u23(1, 1);
        u12(0, 0) = scale(u.shifted(mu), Complex(2) * a);
        u13(0, 0) = mul(u, u);
        u23(0, 0) = scale(u.shifted(nu), b);
        s.U[{0, 1}] = u12;
        s.U[{0, 2}] = u13;
        s.U[{1, 2}] = u23;
    }
    return s;
}

CMat symmetric_square_gauge(const Complex& f) {
    CMat g = CMat::identity(3);
    g(0, 1) = Complex(2) * f;
    g(0, 2) = f * f;
    g(1, 2) = f;
    return g;
}

std::array<long long, 3> symmetric_square_multiplicities(long long r, long long s) {
    return {(r * r + r) / 2, r * s, (s * s + s) / 2};
}

BorelSquareReport borel_square_obstructions(const Complex& q, int m_max) {
    if (m_max < 0) throw TruncationInsufficient("borel_square_obstructions(): m_max < 0");
    const int K = m_max + 60; // partial-product horizon
    const int N = m_max + 60; // term horizon
    BorelSquareReport rep;
    const Complex poch_inf = pochhammer_inf(Complex(1) / q, Complex(1) / q);
    for (int m = 0; m <= m_max; ++m) {
        const Complex xi = cpow_int(q, m);
        Complex sum(0);
        for (int n = 0; n <= N; ++n) {
            // xi^n * prod_{k<=K, k != n} (1 - q^{-k} xi); the k = m factor
            // vanishes identically for every n != m.
            Complex prod = cpow_int(xi, n);
            for (int k = 0; k <= K; ++k) {
                if (k == n) continue;
                prod *= Complex(1) - cpow_int(q, m - k);
                if (prod == Complex(0)) break;
            }
            sum += prod;
        }
        rep.computed.push_back(sum);
        const Complex ref = (m % 2 == 0 ? Complex(1) : Complex(-1)) *
                            cpow_int(q, static_cast<long long>(m) * (3 * m + 1) / 2) *
                            pochhammer(Complex(1) / q, Complex(1) / q, m) * poch_inf;
        rep.reference.push_back(ref);
        rep.max_rel_err = std::max(rep.max_rel_err, std::abs(sum - ref) / std::abs(ref));
    }
    return rep;
}

namespace fixtures {

LaurentSeries confluent_g0(const Complex& a, const Complex& b, const Complex& q, int order) {
    // (s^2 - (1 + (a+b) q^2 z) s + q z (1 + a b q^2 z)) g = 0, g in 1 + z C{z}.
    LaurentSeries g = LaurentSeries::zero(0, order);
    g.at(0) = Complex(1);
    for (int n = 1; n <= order; ++n) {
        Complex rhs = (a + b) * cpow_int(q, n + 1) * g.at(n - 1) - q * g.at(n - 1);
        if (n >= 2) rhs -= a * b * q * q * q * g.at(n - 2);
        g.at(n) = rhs / (cpow_int(q, 2 * n) - cpow_int(q, n));
    }
    return g;
}

ConfluentReport confluent_factorization_check(const Complex& a, const Complex& b,
                                              const Complex& q, int order) {
    ConfluentReport rep;
    const LaurentSeries g0 = confluent_g0(a, b, q, order);
    const LaurentSeries sg0 = sigma_q(g0, 1, q);
    const LaurentSeries g0_inv = invert(g0);
    const LaurentSeries sg0_inv = invert(sg0);

    LaurentSeries one_ab = LaurentSeries::zero(0, order);
    one_ab.at(0) = Complex(1);
    one_ab.at(1) = a * b * q * q;
    LaurentSeries one_sum = LaurentSeries::zero(0, order);
    one_sum.at(0) = Complex(1);
    one_sum.at(1) = (a + b) * q * q;

    const LaurentSeries A = mul(one_ab, mul(g0, sg0_inv));
    const LaurentSeries B = mul(sg0, g0_inv);

    // sigma(B) + q z A = 1 + (a+b) q^2 z
    const LaurentSeries lhs1 = add(sigma_q(B, 1, q), scale(A.shifted(1), q));
    rep.factor_identity_residual =
        max_abs_diff(lhs1, one_sum.restricted(lhs1.lo(), lhs1.hi())) /
        std::max(Real(1), one_sum.max_abs());

    // A B = 1 + a b q^2 z
    const LaurentSeries lhs2 = mul(A, B);
    rep.product_identity_residual =
        max_abs_diff(lhs2, one_ab.restricted(lhs2.lo(), lhs2.hi())) /
        std::max(Real(1), one_ab.max_abs());

    if (a == Complex(0) && b == Complex(0)) {
        Real worst = 0;
        for (int n = 0; n <= order; ++n) {
            const Complex want = (n % 2 == 0 ? Complex(1) : Complex(-1)) *
                                 cpow_int(q, -static_cast<long long>(n) * n) /
                                 pochhammer(Complex(1) / q, Complex(1) / q, n);
            worst = std::max(worst, std::abs(g0.at(n) - want) / std::max(std::abs(want), Real(1e-30)));
        }
        rep.closed_form_residual = worst;
    }
    return rep;
}

Real conjectured_confluent_stokes_residual(const Complex& q, const Complex& lambda,
                                           const Complex& mu, int order) {
    // gauge the a = b = 0 module to diag(1, z) with entry u = z/(g0 sigma g0)
    const LaurentSeries g0 = confluent_g0(Complex(0), Complex(0), q, order);
    const LaurentSeries u =
        mul(invert(g0), invert(sigma_q(g0, 1, q))).shifted(1);
    const auto sl = q_euler_sum(Complex(1), u, lambda, q, order + 8);
    const auto sm = q_euler_sum(Complex(1), u, mu, q, order + 8);
    const Complex poch = pochhammer_inf(Complex(1) / q, Complex(1) / q);
    Real worst = 0;
    int used = 0;
    for (int k = 0; k < 24 && used < 8; ++k) {
        const Complex z = Complex(0.34, 0.21) * cpow_int(q, -(k % 3)) *
                          Complex(std::cos(Real(0.8) * k), std::sin(Real(0.8) * k));
        bool ok = true;
        for (const Complex& pole : {-lambda, -mu, Complex(-1, 0)})
            if (dq_distance(z, pole, q) < Real(0.08)) ok = false;
        if (!ok) continue;
        ++used;
        // the identity verifies with this orientation of the difference
        const Complex lhs = sm.eval(z) - sl.eval(z);
        const Complex rhs = z * poch * poch * theta_q(-lambda / mu, q) *
                            theta_q(z / (lambda * mu), q) /
                            (theta_q(-Complex(1) / lambda, q) * theta_q(-Complex(1) / mu, q) *
                             theta_q(lambda / z, q) * theta_q(z / mu, q));
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(std::abs(rhs), Real(1e-30)));
    }
    return worst;
}

Complex MockThetaSum::eval(const Complex& z) const {
    const Complex th = theta_q_shifted(c, z, q);
    if (std::abs(th) == Real(0)) throw PoleHit("mock-theta sum evaluated on its pole spiral");
    return qstokes::eval(numerator, z) / (th * th);
}

MockThetaSum mock_theta_sum(const Complex& c, const Complex& q, int window) {
    MockThetaSum s;
    s.q = q;
    s.c = c;
    s.sqrt_q = std::sqrt(q);
    // forbidden when sqrt(q) c^2 lies in q^Z
    const Complex w0 = s.sqrt_q * c * c;
    const Real logq = std::log(std::abs(q));
    const long long m0 = static_cast<long long>(std::llround(std::log(std::abs(w0)) / logq));
    for (long long mm = m0 - 2; mm <= m0 + 2; ++mm)
        if (std::abs(w0 - cpow_int(q, mm)) <= kResonanceMargin * std::abs(cpow_int(q, mm)))
            throw ForbiddenDirection("mock_theta_sum(): sqrt(q) c^2 lies on q^Z");

    const int w = window;
    const LaurentSeries thq1 = theta_series(ThetaKind::make_thq(), q, -w - 8, w + 8);
    const LaurentSeries tau = mul_onto(thq1, thq1, -w - 8, w + 8); // thq^2
    s.numerator = LaurentSeries::zero(-w, w);
    for (int n = -w; n <= w; ++n) {
        const Complex num = (tau.at(n - 1) * c - tau.at(n)) * cpow_int(Complex(1) / c, n);
        s.numerator.at(n) = num / (s.sqrt_q * c * c * cpow_int(q, n) - Complex(1));
    }
    return s;
}

MockThetaReport mock_theta_check(const Complex& c, const Complex& q, int order) {
    MockThetaReport rep;
    const Complex sq = std::sqrt(q);
    const MockThetaSum s = mock_theta_sum(c, q);

    // equation residual at sample points off the pole spiral
    Real worst = 0;
    int used = 0;
    for (int k = 0; k < 12 && used < 8; ++k) {
        const Complex z = Complex(0.31, 0.17) * cpow_int(q, -(k % 4)) *
                          Complex(std::cos(Real(0.7) * k), std::sin(Real(0.7) * k));
        if (dq_distance(z, Divisor::single(-c, 1, q), q) < Real(0.05)) continue;
        ++used;
        const Complex lhs = sq * z * z * s.eval(q * z) - s.eval(z);
        const Complex rhs = z - Complex(1);
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(Real(1), std::abs(rhs)));
    }
    rep.equation_residual = worst;

    // formal split fhat(z) = ghat(z^2) + z hhat(z^2), with
    //   sqrt(q) Z sigma_Q ghat - ghat = -1,  q sqrt(q) Z sigma_Q hhat - hhat = 1.
    const Complex Q = q * q;
    LaurentSeries fhat = LaurentSeries::zero(0, order);
    for (int n = 0; n <= order; ++n) {
        Complex v(0);
        if (n == 0) v = Complex(1);
        if (n == 1) v = Complex(-1);
        if (n >= 2) v = sq * cpow_int(q, n - 2) * fhat.at(n - 2);
        fhat.at(n) = v;
    }
    Real split = 0;
    Complex gk(1), hk(-1);
    for (int k = 0; 2 * k + 1 <= order; ++k) {
        split = std::max(split, std::abs(fhat.at(2 * k) - gk));
        split = std::max(split, std::abs(fhat.at(2 * k + 1) - hk));
        gk *= sq * cpow_int(Q, k);
        hk *= q * sq * cpow_int(Q, k);
    }
    rep.split_residual = split / std::max(Real(1), fhat.max_abs());

    // the two level-(Z,Q) class invariants of the split equations
    rep.invariant_g = borel_eval(LaurentSeries::monomial(Complex(-1), 0), Complex(1) / sq, Q);
    rep.invariant_h = borel_eval(LaurentSeries::monomial(Complex(1), 0), Complex(1) / (q * sq), Q);
    return rep;
}

MordellReport mordell_check(const Complex& lambda, const Complex& q, int window) {
    const Complex sq = std::sqrt(q);
    // (sqrt(q) z sigma_q - 1) G = sqrt(q) z
    const LaurentSeries u = LaurentSeries::monomial(sq, 1, 0, window);
    const QEulerSum s = q_euler_sum(sq, u, lambda, q, window);
    Real worst = 0;
    int used = 0;
    for (int k = 0; k < 12 && used < 8; ++k) {
        const Complex z = Complex(0.23, -0.11) * cpow_int(q, -(k % 4)) *
                          Complex(std::cos(Real(0.9) * k), std::sin(Real(0.9) * k));
        if (dq_distance(z, Divisor::single(-lambda, 1, q), q) < Real(0.05)) continue;
        ++used;
        const Complex lhs = sq * z * s.eval(q * z) - s.eval(z);
        const Complex rhs = sq * z;
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(Real(1), std::abs(rhs)));
    }
    MordellReport rep;
    rep.equation_residual = worst;
    return rep;
}

} // namespace fixtures

} // namespace qstokes
