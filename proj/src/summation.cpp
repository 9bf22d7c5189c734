#include "qstokes/summation.hpp"

#include <climits>

#include <algorithm>
#include <cmath>

#include "qstokes/reduction.hpp"

namespace qstokes {

namespace {

bool in_q_spiral(const Complex& w, const Complex& q, Real margin) {
    const Real logq = std::log(std::abs(q));
    const long long m0 = static_cast<long long>(std::llround(std::log(std::abs(w)) / logq));
    for (long long m = m0 - 2; m <= m0 + 2; ++m) {
        const Complex qm = cpow_int(q, m);
        if (std::abs(w - qm) <= margin * std::abs(qm)) return true;
    }
    return false;
}

} // namespace

Divisor Divisor::single(const Complex& lambda, int nu, const Complex& q) {
    return make({{lambda, nu}}, q);
}

Divisor Divisor::make(std::vector<Term> raw, const Complex& q) {
    Divisor d;
    for (auto& t : raw) {
        if (t.nu < 1) throw SchemaError("divisor weights must be positive");
        t.lambda = reduce_to_fundamental_annulus(t.lambda, q);
        d.terms.push_back(t);
    }
    std::sort(d.terms.begin(), d.terms.end(),
              [](const Term& a, const Term& b) { return std::abs(a.lambda) < std::abs(b.lambda); });
    for (size_t i = 0; i < d.terms.size(); ++i)
        for (size_t j = i + 1; j < d.terms.size(); ++j)
            if (Direction(d.terms[i].lambda, q).same_class(Direction(d.terms[j].lambda, q), q))
                throw SchemaError("divisor spirals must be pairwise distinct");
    return d;
}

int Divisor::degree() const {
    int nu = 0;
    for (const auto& t : terms) nu += t.nu;
    return nu;
}

Complex Divisor::weight(const Complex& q) const {
    Complex w(1);
    for (const auto& t : terms) w *= cpow_int(t.lambda, t.nu);
    if (degree() % 2 != 0) w = -w;
    return reduce_to_fundamental_annulus(w, q);
}

Real dq_distance(const Complex& z, const Complex& lambda, const Complex& q) {
    if (z == Complex(0) || lambda == Complex(0))
        throw PoleHit("dq_distance(): arguments must be nonzero");
    const Real logq = std::log(std::abs(q));
    const long long k0 =
        static_cast<long long>(std::llround(std::log(std::abs(z / lambda)) / logq));
    Real best = Real(1); // the k -> +inf limit of |1 - z/xi|
    for (long long k = k0 - 6; k <= k0 + 6; ++k)
        best = std::min(best, std::abs(Complex(1) - z / (lambda * cpow_int(q, k))));
    return best;
}

Real dq_distance(const Complex& z, const Divisor& divisor, const Complex& q) {
    Real d = 1;
    for (const auto& t : divisor.terms)
        d *= rpow_int(dq_distance(z, t.lambda, q), t.nu);
    return d;
}

// --- scalar q-Euler sum ------------------------------------------------------

QEulerSum q_euler_sum(const Complex& a, const LaurentSeries& u, const Complex& lambda,
                      const Complex& q, int window) {
    if (u.empty()) throw EmptyWindow("q_euler_sum(): u has empty window");
    if (in_q_spiral(a * lambda, q, kResonanceMargin))
        throw ForbiddenDirection("q_euler_sum(): lambda lies on [a^{-1}; q]");

    const int w = window;
    const LaurentSeries theta =
        theta_series(ThetaKind::make_shifted(lambda), q, u.lo() - w, u.hi() + w);
    const LaurentSeries prod = mul_onto(u, theta, u.lo() - w, u.lo() + w);

    QEulerSum s;
    s.q = q;
    s.a = a;
    s.lambda = lambda;
    s.numerator = LaurentSeries::zero(prod.lo(), prod.hi());
    for (int n = prod.lo(); n <= prod.hi(); ++n)
        s.numerator.at(n) = prod.at(n) / (a * lambda * cpow_int(q, n) - Complex(1));
    return s;
}

Complex QEulerSum::eval(const Complex& z) const {
    const Complex th = theta_q_shifted(lambda, z, q);
    if (std::abs(th) == Real(0)) throw PoleHit("q-Euler sum evaluated on its pole spiral");
    return qstokes::eval(numerator, z) / th;
}

Complex QEulerSum::eval_spiral(const LaurentSeries& u, const Complex& z) const {
    Complex sum(0);
    Real running = 0;
    int quiet = 0;
    for (int k = 0; k <= 96; ++k) {
        Real mag = 0;
        for (int sgn : {1, -1}) {
            if (k == 0 && sgn == -1) continue;
            const Complex mu = lambda * cpow_int(q, sgn * k);
            const Complex term = borel_eval(u, mu, q) /
                                 ((a * mu - Complex(1)) * theta_q_shifted(mu, z, q));
            sum += term;
            mag = std::max(mag, std::abs(term));
        }
        running = std::max(running, std::abs(sum));
        if (mag < kTailEpsilon * std::max(running, Real(1e-30))) {
            if (++quiet >= 3) return sum;
        } else {
            quiet = 0;
        }
    }
    throw NonConvergent("q_euler spiral sum did not certify its tail");
}

// --- meromorphic sums --------------------------------------------------------

CMat MeromorphicBlock::eval(const Complex& z, const Complex& q) const {
    // numerators are certified only inside their annulus of convergence
    CMat v(num.rows(), num.cols());
    for (int i = 0; i < num.rows(); ++i)
        for (int j = 0; j < num.cols(); ++j) v(i, j) = eval_checked(num(i, j), z);
    Complex scale(1);
    for (const auto& d : denom) {
        const Complex th = theta_q_shifted(d.lambda, z, q);
        if (std::abs(th) == Real(0)) throw PoleHit("meromorphic block evaluated on a pole spiral");
        scale /= cpow_int(th, d.power);
    }
    return scale * v;
}

int MeromorphicSum::rank() const {
    int n = 0;
    for (int r : ranks) n += r;
    return n;
}

CMat MeromorphicSum::eval(const Complex& z) const {
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

CMat MeromorphicSum::eval_inverse(const Complex& z) const {
    const int n = rank();
    const CMat f = eval(z);
    const CMat nmat = CMat::identity(n) - f;
    CMat acc = CMat::identity(n);
    CMat pw = nmat;
    for (size_t k = 1; k < ranks.size(); ++k) {
        acc = acc + pw;
        pw = pw * nmat;
    }
    return acc;
}

MeromorphicSum algebraic_sum(const BlockModule& m, const Direction& c, int window) {
    m.validate();
    if (!is_generic(c, m)) {
        std::string msg = "algebraic_sum(): direction is resonant; forbidden classes:";
        for (const auto& d : resonance_set(m))
            msg += " (" + std::to_string(static_cast<double>(d.c.real())) + "," +
                   std::to_string(static_cast<double>(d.c.imag())) + ")";
        throw ForbiddenDirection(msg);
    }
    const Complex q = m.q;
    const int k = m.block_count();
    const int w = window;
    const int wext = w + 8;

    // Powers of theta_{q,c} as certified two-sided data.
    const int mu_span = m.blocks.back().mu - m.blocks.front().mu;
    std::vector<LaurentSeries> theta_pow(static_cast<size_t>(mu_span + 1));
    theta_pow[0] = LaurentSeries::monomial(Complex(1), 0, -wext, wext);
    if (mu_span >= 1)
        theta_pow[1] = theta_series(ThetaKind::make_shifted(c.c), q, -wext, wext);
    for (int d = 2; d <= mu_span; ++d)
        theta_pow[static_cast<size_t>(d)] =
            mul_onto(theta_pow[static_cast<size_t>(d - 1)], theta_pow[1], -wext, wext);

    // Twisted blocks B_ij = c^{mu_i} z^{-mu_i} U_ij theta_c^{mu_j - mu_i}.
    std::map<std::pair<int, int>, SMat> b;
    for (const auto& [ij, u] : m.U) {
        const auto [bi, bj] = ij;
        const int mu_i = m.blocks[static_cast<size_t>(bi)].mu;
        const int d = m.blocks[static_cast<size_t>(bj)].mu - mu_i;
        SMat t(u.rows(), u.cols());
        for (int i = 0; i < u.rows(); ++i)
            for (int j = 0; j < u.cols(); ++j) {
                LaurentSeries cell = mul_onto(u(i, j).shifted(-mu_i),
                                                   theta_pow[static_cast<size_t>(d)], -wext, wext);
                t(i, j) = scale(cell, cpow_int(c.c, mu_i));
            }
        b.emplace(ij, std::move(t));
    }

    MeromorphicSum out;
    out.q = q;
    out.c = c;
    out.ranks.resize(static_cast<size_t>(k));
    out.mus.resize(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) {
        out.ranks[static_cast<size_t>(i)] = m.blocks[static_cast<size_t>(i)].rank();
        out.mus[static_cast<size_t>(i)] = m.blocks[static_cast<size_t>(i)].mu;
    }

    std::map<std::pair<int, int>, SMat> g;
    for (int span = 1; span < k; ++span) {
        for (int i = 0; i + span < k; ++i) {
            const int j = i + span;
            const auto& bi = m.blocks[static_cast<size_t>(i)];
            const auto& bj = m.blocks[static_cast<size_t>(j)];
            SMat rhs = b.count({i, j}) ? b.at({i, j})
                                       : smat_zero(bi.rank(), bj.rank(), -w, w);
            for (int l = i + 1; l < j; ++l)
                if (b.count({i, l}) && g.count({l, j}))
                    rhs = rhs + mul_onto(b.at({i, l}), g.at({l, j}), -wext, wext);

            int rlo = INT_MAX, rhi = -INT_MAX;
            for (const auto& e : rhs.data()) {
                rlo = std::min(rlo, e.lo());
                rhi = std::max(rhi, e.hi());
            }
            rlo = std::max(rlo, -w);
            rhi = std::min(rhi, w);
            SMat x = smat_zero(bi.rank(), bj.rank(), rlo, rhi);
            const CMat ai = cpow_int(c.c, bi.mu) * bi.A;
            const CMat aj = cpow_int(c.c, bj.mu) * bj.A;
            for (int p = rlo; p <= rhi; ++p) {
                const CMat kmat = sylvester_matrix(cpow_int(q, p), aj, ai);
                CMat y(bi.rank() * bj.rank(), 1);
                const CMat yc = coeff(restricted(rhs, rlo, rhi), p);
                for (int jj = 0; jj < bj.rank(); ++jj)
                    for (int ii = 0; ii < bi.rank(); ++ii)
                        y(jj * bi.rank() + ii, 0) = yc(ii, jj);
                CMat sol;
                try {
                    sol = solve(kmat, y);
                } catch (const LinearSolveSingular&) {
                    throw ForbiddenDirection(
                        "algebraic_sum(): resonant coefficient solve at order " + std::to_string(p));
                }
                for (int jj = 0; jj < bj.rank(); ++jj)
                    for (int ii = 0; ii < bi.rank(); ++ii)
                        x(ii, jj).at(p) = sol(jj * bi.rank() + ii, 0);
            }
            g.emplace(std::pair<int, int>{i, j}, std::move(x));
        }
    }

    for (auto& [ij, blk] : g) {
        const auto [bi, bj] = ij;
        const int d = m.blocks[static_cast<size_t>(bj)].mu - m.blocks[static_cast<size_t>(bi)].mu;
        MeromorphicBlock cell;
        cell.num = std::move(blk);
        if (d != 0) cell.denom.push_back({c.c, d});
        out.blocks[ij] = std::move(cell);
    }
    return out;
}

Real summation_residual(const MeromorphicSum& f, const BlockModule& m, const Complex& z) {
    const CMat fz = f.eval(z);
    const CMat fqz = f.eval(m.q * z);
    // assemble A_0(z) and A_U(z)
    const int n = m.rank();
    CMat a0(n, n), au(n, n);
    for (int bidx = 0; bidx < m.block_count(); ++bidx) {
        const auto& blk = m.blocks[static_cast<size_t>(bidx)];
        const int off = m.block_offset(bidx);
        const Complex zm = cpow_int(z, blk.mu);
        for (int i = 0; i < blk.rank(); ++i)
            for (int j = 0; j < blk.rank(); ++j) {
                a0(off + i, off + j) = zm * blk.A(i, j);
                au(off + i, off + j) = zm * blk.A(i, j);
            }
    }
    for (const auto& [ij, u] : m.U) {
        const auto [bi, bj] = ij;
        const int ro = m.block_offset(bi), co = m.block_offset(bj);
        for (int i = 0; i < u.rows(); ++i)
            for (int j = 0; j < u.cols(); ++j) au(ro + i, co + j) = eval(u(i, j), z);
    }
    const CMat lhs = fqz * a0;
    const CMat rhs = au * fz;
    const Real scale = std::max({Real(1), max_abs(lhs), max_abs(rhs)});
    return max_abs(lhs - rhs) / scale;
}

// --- Borel-Ritt --------------------------------------------------------------

LaurentSeries theta_divisor_series(const Divisor& divisor, const Complex& q, int lo, int hi) {
    if (divisor.terms.empty()) throw SchemaError("theta_divisor_series(): empty divisor");
    const int margin = 8;
    LaurentSeries acc = LaurentSeries::monomial(Complex(1), 0, lo - margin, hi + margin);
    const Complex qinv = Complex(1) / q;
    for (const auto& t : divisor.terms) {
        LaurentSeries th = LaurentSeries::zero(lo - margin, hi + margin);
        for (int n = th.lo(); n <= th.hi(); ++n)
            th.at(n) = cpow_int(qinv, tri(n)) * cpow_int(-Complex(1) / t.lambda, n);
        for (int rep = 0; rep < t.nu; ++rep)
            acc = mul_onto(acc, th, lo - margin, hi + margin);
    }
    return acc.restricted(lo, hi);
}

BorelRittSum borel_ritt_sum(const LaurentSeries& ghat, const Divisor& divisor, int n0,
                            const Complex& q, int window) {
    if (ghat.empty() || ghat.lo() < 0)
        throw NotQGevrey("borel_ritt_sum(): ghat must be a power series");
    const int nu = divisor.degree();
    if (nu < 1) throw SchemaError("borel_ritt_sum(): divisor must have positive degree");
    if (n0 > 0) throw N0TooLarge("borel_ritt_sum(): N0 must be <= 0");

    // q-Gevrey growth check: |a_n| <= C A^n |q|^{n^2/(2 nu)} with moderate A.
    const Real logq = std::log(std::abs(q));
    Real log_a_est = -std::numeric_limits<Real>::infinity();
    for (int n = 1; n <= ghat.hi(); ++n) {
        const Real an = std::abs(ghat.at(n));
        if (an == Real(0)) continue;
        const Real la = (std::log(an) - n * n * logq / (2 * nu)) / n;
        log_a_est = std::max(log_a_est, la);
    }
    if (log_a_est > std::log(Real(1e4)))
        throw NotQGevrey("borel_ritt_sum(): coefficients exceed the level-nu growth class");

    const int blo = n0 - window - ghat.hi();
    const LaurentSeries beta = theta_divisor_series(divisor, q, blo, n0 + 1);

    BorelRittSum out;
    out.q = q;
    out.divisor = divisor;
    out.n0 = n0;
    out.F = LaurentSeries::zero(n0 - window, n0);
    for (int l = n0 - window; l <= n0; ++l) {
        Complex cl(0);
        Real peak = 0;
        Real last = 0;
        for (int n = 0; n <= ghat.hi(); ++n) {
            const Complex term = ghat.at(n) * beta.coeff(l - n);
            cl += term;
            last = std::abs(term);
            peak = std::max(peak, last);
        }
        // the series over n must have entered its decaying regime
        if (peak > Real(0) && last > Real(1e-12) * std::max(peak, std::abs(cl)))
            throw N0TooLarge("borel_ritt_sum(): c_" + std::to_string(l) +
                             " not converged; lower N0 or extend ghat");
        out.F.at(l) = cl;
    }
    return out;
}

Complex BorelRittSum::eval_theta_divisor(const Complex& z) const {
    Complex th(1);
    for (const auto& t : divisor.terms)
        th *= cpow_int(theta_classic(-z / t.lambda, q), t.nu);
    return th;
}

Complex BorelRittSum::eval(const Complex& z) const {
    const Complex th = eval_theta_divisor(z);
    if (std::abs(th) == Real(0)) throw PoleHit("Borel-Ritt sum evaluated on its divisor");
    return qstokes::eval(F, z) / th;
}

// --- asymptotic check --------------------------------------------------------

AsymptoticReport asymptotic_check(const std::function<Complex(const Complex&)>& f,
                                  const LaurentSeries& fhat, const Divisor& poles,
                                  int nu, const std::vector<Complex>& samples,
                                  const Complex& q, int n_max, Real a_cap) {
    AsymptoticReport rep;
    const Real logq = std::log(std::abs(q));
    n_max = std::min(n_max, fhat.hi());
    for (int bigN = 0; bigN <= n_max; ++bigN) {
        Real worst = 0;
        for (const Complex& z : samples) {
            Complex trunc(0);
            for (int n = fhat.lo(); n < bigN; ++n)
                if (n >= fhat.lo() && n <= fhat.hi()) trunc += fhat.at(n) * cpow_int(z, n);
            const Real eps = dq_distance(z, poles, q);
            if (eps <= Real(0)) continue;
            const Real denom = std::exp(bigN * bigN * logq / (2 * nu)) *
                               rpow_int(std::abs(z), bigN);
            worst = std::max(worst, std::abs(f(z) - trunc) * eps / denom);
        }
        rep.ratios.push_back(std::max(worst, Real(1e-300)));
    }
    // Fit log r_N <= log C + N log A by least squares, then lift C.
    const int n = static_cast<int>(rep.ratios.size());
    Real sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        const Real y = std::log(rep.ratios[static_cast<size_t>(i)]);
        sx += i;
        sy += y;
        sxx += Real(i) * i;
        sxy += i * y;
    }
    const Real slope = (n * sxy - sx * sy) / std::max(n * sxx - sx * sx, Real(1e-30));
    rep.fitted_a = std::exp(slope);
    Real logc = -std::numeric_limits<Real>::infinity();
    for (int i = 0; i < n; ++i)
        logc = std::max(logc, std::log(rep.ratios[static_cast<size_t>(i)]) - slope * i);
    rep.fitted_c = std::exp(logc);
    rep.pass = std::isfinite(rep.fitted_a) && std::isfinite(rep.fitted_c) &&
               rep.fitted_a <= a_cap;
    return rep;
}

} // namespace qstokes
