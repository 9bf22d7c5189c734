#include "qstokes/newton.hpp"

#include <algorithm>
#include <cmath>

namespace qstokes {

Rational::Rational(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw UndefinedValuation("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
}

Rational rational_scaled(const Rational& a, long long k) {
    return Rational(a.num * k, a.den);
}

LaurentSeries apply(const QDiffOperator& P, const LaurentSeries& f) {
    if (P.coeffs.empty()) throw EmptyWindow("apply(): operator has no coefficients");
    bool first = true;
    LaurentSeries acc;
    for (const auto& [i, a] : P.coeffs) {
        LaurentSeries term = mul(a, sigma_q(f, i, P.q));
        acc = first ? term : add(acc, term);
        first = false;
    }
    return acc;
}

QDiffOperator mul(const QDiffOperator& P, const QDiffOperator& Q) {
    QDiffOperator R;
    R.q = P.q;
    for (const auto& [i, a] : P.coeffs)
        for (const auto& [j, b] : Q.coeffs) {
            LaurentSeries term = mul(a, sigma_q(b, i, P.q));
            auto it = R.coeffs.find(i + j);
            if (it == R.coeffs.end())
                R.coeffs.emplace(i + j, std::move(term));
            else
                it->second = add(it->second, term);
        }
    return R;
}

NewtonPolygon newton_polygon(const QDiffOperator& P) {
    if (P.coeffs.empty()) throw UndefinedValuation("newton_polygon(): empty operator");
    std::vector<std::pair<long long, long long>> pts; // (i, v0(a_i))
    for (const auto& [i, a] : P.coeffs) {
        auto v = a.try_valuation();
        if (v) pts.emplace_back(i, *v);
    }
    if (pts.empty()) throw UndefinedValuation("newton_polygon(): all coefficients negligible");
    const int dmin = P.coeffs.begin()->first;
    const int dmax = P.coeffs.rbegin()->first;
    if (pts.front().first != dmin || pts.back().first != dmax)
        throw UndefinedValuation("newton_polygon(): extreme coefficient has no valuation");
    if (pts.size() == 1) return NewtonPolygon{};

    // Lower convex hull, exact on integer pairs.
    auto cross = [](const std::pair<long long, long long>& o,
                    const std::pair<long long, long long>& a,
                    const std::pair<long long, long long>& b) {
        return (a.first - o.first) * (b.second - o.second) -
               (a.second - o.second) * (b.first - o.first);
    };
    std::vector<std::pair<long long, long long>> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) <= 0)
            hull.pop_back();
        hull.push_back(p);
    }

    NewtonPolygon np;
    for (size_t k = 1; k < hull.size(); ++k) {
        const long long dr = hull[k].first - hull[k - 1].first;
        const long long dd = hull[k].second - hull[k - 1].second;
        np.slopes.emplace_back(Rational(dd, dr), static_cast<int>(dr));
    }
    return np;
}

Rational irregularity(const NewtonPolygon& np) {
    Rational irr(0, 1);
    for (const auto& [mu, r] : np.slopes) {
        if (mu.num > 0) irr = irr + rational_scaled(mu, r);
    }
    return irr;
}

long long index(const QDiffOperator& P, IndexSetting setting) {
    const NewtonPolygon np = newton_polygon(P);
    if (!np.all_integral())
        throw NonIntegralSlopes("index(): operator has non-integral slopes");
    if (setting == IndexSetting::formal) return 0;
    const Rational irr = irregularity(np);
    return -irr.num / irr.den;
}

SMat companion(const QDiffOperator& P) {
    const int n = P.degree();
    if (n < 1 || P.min_degree() < 0)
        throw NonInvertibleLeading("companion(): operator must span degrees 0..n");
    auto top = P.coeffs.find(n);
    if (top == P.coeffs.end() || !top->second.try_valuation())
        throw NonInvertibleLeading("companion(): top coefficient is not invertible");
    const LaurentSeries an_inv = invert(top->second);

    // Window that every ratio can live on.
    int lo = an_inv.lo(), hi = an_inv.hi();
    std::vector<LaurentSeries> last_row;
    for (int j = 0; j < n; ++j) {
        auto it = P.coeffs.find(j);
        if (it == P.coeffs.end()) {
            last_row.push_back(LaurentSeries()); // filled below once window known
            continue;
        }
        LaurentSeries r = -mul(it->second, an_inv);
        lo = std::min(lo, r.lo());
        hi = std::min(hi, r.hi());
        last_row.push_back(std::move(r));
    }
    SMat A = smat_zero(n, n, lo, hi);
    for (int i = 0; i + 1 < n; ++i)
        A(i, i + 1) = LaurentSeries::monomial(Complex(1), 0, lo, hi);
    for (int j = 0; j < n; ++j)
        if (!last_row[static_cast<size_t>(j)].empty())
            A(n - 1, j) = last_row[static_cast<size_t>(j)].restricted(lo, hi);
    return A;
}

Real HomotopyReport::max_residual() const {
    return std::max({round_trip, left_identity, right_identity});
}

namespace {

using Vec = std::vector<LaurentSeries>;

Real rel_diff(const Vec& a, const Vec& b) {
    Real m = 0, scale = 1;
    for (size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, max_abs_diff(a[i], b[i]));
        scale = std::max(scale, b[i].max_abs());
    }
    return m / scale;
}

} // namespace

HomotopyReport homotopy_check(const QDiffOperator& P, const std::vector<LaurentSeries>& probes,
                              Real fail_threshold) {
    const int n = P.degree();
    if (n < 1) throw NonInvertibleLeading("homotopy_check(): order must be >= 1");
    if (probes.empty()) throw EmptyWindow("homotopy_check(): no probe series");
    const Complex q = P.q;

    // Unitary coefficients a_k with a_0 = 1: P = sigma^n + a_1 sigma^{n-1} + ... + a_n.
    const LaurentSeries top_inv = invert(P.coeffs.at(n));
    std::vector<LaurentSeries> a(static_cast<size_t>(n + 1));
    for (int k = 0; k <= n; ++k) {
        auto it = P.coeffs.find(n - k);
        if (it != P.coeffs.end())
            a[static_cast<size_t>(k)] = mul(it->second, top_inv);
    }

    auto apply_unitary_tail = [&](int i, const LaurentSeries& f) {
        // P_i = sigma^{n-i} + a_1 sigma^{n-i-1} + ... + a_{n-i}; P_0 = P.
        LaurentSeries acc = sigma_q(f, n - i, q);
        for (int k = 1; k <= n - i; ++k)
            if (!a[static_cast<size_t>(k)].empty())
                acc = add(acc, mul(a[static_cast<size_t>(k)], sigma_q(f, n - i - k, q)));
        return acc;
    };

    const SMat A = companion(P);
    auto delta = [&](const Vec& x) {
        Vec y(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            LaurentSeries s = sigma_q(x[static_cast<size_t>(i)], 1, q);
            for (int j = 0; j < n; ++j)
                s = sub(s, mul(A(i, j), x[static_cast<size_t>(j)]));
            y[static_cast<size_t>(i)] = s;
        }
        return y;
    };
    auto delta_prime = [&](const Vec& x) {
        // component i (1-based): sum over j+k = i-1, k >= 1 of sigma^j x_k.
        Vec y(static_cast<size_t>(n));
        for (int i = 1; i <= n; ++i) {
            LaurentSeries s;
            bool first = true;
            for (int k = 1; k <= i - 1; ++k) {
                const int j = i - 1 - k;
                LaurentSeries term = sigma_q(x[static_cast<size_t>(k - 1)], j, q);
                s = first ? term : add(s, term);
                first = false;
            }
            if (first) {
                // empty sum: a zero on a window as wide as the inputs allow
                s = scale(x[0], Complex(0));
            }
            y[static_cast<size_t>(i - 1)] = s;
        }
        return y;
    };
    auto vmap = [&](const LaurentSeries& f) {
        Vec y(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) y[static_cast<size_t>(i)] = sigma_q(f, i, q);
        return y;
    };
    auto imap = [&](const LaurentSeries& g) {
        Vec y(static_cast<size_t>(n));
        for (int i = 0; i + 1 < n; ++i) y[static_cast<size_t>(i)] = scale(g, Complex(0));
        y[static_cast<size_t>(n - 1)] = g;
        return y;
    };
    auto pi_map = [&](const Vec& x) {
        LaurentSeries s = apply_unitary_tail(1, x[0]);
        for (int i = 2; i <= n; ++i)
            s = add(s, apply_unitary_tail(i, x[static_cast<size_t>(i - 1)]));
        return s;
    };

    HomotopyReport rep;
    for (size_t p = 0; p < probes.size(); ++p) {
        const LaurentSeries& f = probes[p];
        // Round trip on both degrees of the complex morphism.
        rep.round_trip = std::max(rep.round_trip, rel_diff({vmap(f)[0]}, {f}));
        rep.round_trip = std::max(rep.round_trip, rel_diff({pi_map(imap(f))}, {f}));

        // Vector probes from cyclic shifts of the scalar probes.
        Vec x(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i)
            x[static_cast<size_t>(i)] = probes[(p + static_cast<size_t>(i)) % probes.size()];

        const Vec dd = delta_prime(delta(x));
        Vec vpi = vmap(x[0]);
        for (int i = 0; i < n; ++i) vpi[static_cast<size_t>(i)] = sub(vpi[static_cast<size_t>(i)], x[static_cast<size_t>(i)]);
        rep.left_identity = std::max(rep.left_identity, rel_diff(vpi, dd));

        const Vec d2 = delta(delta_prime(x));
        Vec ipi = imap(pi_map(x));
        for (int i = 0; i < n; ++i) ipi[static_cast<size_t>(i)] = sub(ipi[static_cast<size_t>(i)], x[static_cast<size_t>(i)]);
        rep.right_identity = std::max(rep.right_identity, rel_diff(ipi, d2));
    }

    if (fail_threshold >= Real(0)) {
        if (rep.round_trip > fail_threshold)
            throw IdentityViolated("round trip, residual " + std::to_string((double)rep.round_trip));
        if (rep.left_identity > fail_threshold)
            throw IdentityViolated("V o pi1 - Id vs D' o D, residual " + std::to_string((double)rep.left_identity));
        if (rep.right_identity > fail_threshold)
            throw IdentityViolated("I o Pi - Id vs D o D', residual " + std::to_string((double)rep.right_identity));
    }
    return rep;
}

} // namespace qstokes
