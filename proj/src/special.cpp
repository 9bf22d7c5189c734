#include "qstokes/special.hpp"

#include <algorithm>
#include <cmath>

namespace qstokes {

namespace {

void check_q(const Complex& q) {
    if (std::abs(q) < kQMargin)
        throw QModulusTooSmall("require |q| >= 1.1");
}

// Exponent of z^n in the chosen variant: theta has n(n-1)/2, thq has n(n+1)/2.
long long theta_exponent(ThetaKind::Variant v, long long n) {
    return v == ThetaKind::theta ? n * (n - 1) / 2 : n * (n + 1) / 2;
}

Complex theta_series_sum(ThetaKind::Variant v, const Complex& z, const Complex& q) {
    // Symmetric adaptive truncation; the terms decay like |q|^{-n^2/2}.
    const Complex qinv = Complex(1) / q;
    Complex sum(1); // n = 0 term
    Real running_max = Real(1);
    const int n_cap = 512;
    int quiet = 0;
    for (int n = 1; n <= n_cap; ++n) {
        const Complex tp = cpow_int(qinv, theta_exponent(v, n)) * cpow_int(z, n);
        const Complex tm = cpow_int(qinv, theta_exponent(v, -n)) * cpow_int(z, -n);
        sum += tp + tm;
        const Real mag = std::abs(tp) + std::abs(tm);
        running_max = std::max(running_max, mag);
        if (mag < kTailEpsilon * running_max) {
            if (++quiet >= 3) return sum;
        } else {
            quiet = 0;
        }
    }
    throw NonConvergent("theta series did not reach the tail threshold");
}

Complex theta_product(ThetaKind::Variant v, const Complex& z, const Complex& q) {
    // theta: prod (1-q^{-n-1}) (1+q^{-n} z)   (1+q^{-n-1}/z)
    // thq:   prod (1-q^{-n-1}) (1+q^{-n-1} z) (1+q^{-n}/z)
    const Complex qinv = Complex(1) / q;
    const Complex zinv = Complex(1) / z;
    const Real aq = std::abs(qinv);
    Complex prod(1);
    Complex qn(1); // q^{-n}
    const int n_cap = 4096;
    for (int n = 0; n <= n_cap; ++n) {
        const Complex qn1 = qn * qinv; // q^{-n-1}
        if (v == ThetaKind::theta)
            prod *= (Complex(1) - qn1) * (Complex(1) + qn * z) * (Complex(1) + qn1 * zinv);
        else
            prod *= (Complex(1) - qn1) * (Complex(1) + qn1 * z) * (Complex(1) + qn * zinv);
        const Real tail = std::abs(qn1) * (Real(1) + std::abs(z) + std::abs(zinv)) / (Real(1) - aq);
        if (tail < kTailEpsilon) return prod;
        qn = qn1;
    }
    throw NonConvergent("theta product did not reach the tail threshold");
}

} // namespace

Complex eval_theta(const ThetaKind& kind, const Complex& z, const Complex& q, ThetaMode mode) {
    check_q(q);
    if (z == Complex(0)) throw NonConvergent("theta requires z != 0");
    ThetaKind::Variant v = kind.variant;
    Complex arg = z;
    if (v == ThetaKind::theta_q_lambda) {
        if (kind.lambda == Complex(0)) throw NonConvergent("theta_q_lambda requires lambda != 0");
        v = ThetaKind::thq;
        arg = z / kind.lambda;
    }
    // Use the functional equation to bring the argument into the fundamental
    // annulus 1 <= |arg| < |q| before summing; both routes then converge fast.
    //   theta(q^m w) = q^{m(m+1)/2} w^m theta(w),  thq(q^m w) = q^{m(m-1)/2} w^m thq(w).
    const Real aq = std::abs(q);
    long long m = static_cast<long long>(std::floor(std::log(std::abs(arg)) / std::log(aq)));
    Complex w = arg * cpow_int(q, -m);
    // floor rounding can leave |w| marginally outside; nudge once.
    if (std::abs(w) >= aq) {
        w /= q;
        ++m;
    } else if (std::abs(w) < Real(1)) {
        w *= q;
        --m;
    }
    const long long e = v == ThetaKind::theta ? m * (m + 1) / 2 : m * (m - 1) / 2;
    const Complex prefactor = cpow_int(q, e) * cpow_int(w, m);
    const Complex base = mode == ThetaMode::series ? theta_series_sum(v, w, q)
                                                   : theta_product(v, w, q);
    return prefactor * base;
}

Complex theta_classic(const Complex& z, const Complex& q, ThetaMode mode) {
    return eval_theta(ThetaKind::make_theta(), z, q, mode);
}

Complex theta_q(const Complex& z, const Complex& q, ThetaMode mode) {
    return eval_theta(ThetaKind::make_thq(), z, q, mode);
}

Complex pochhammer(const Complex& a, const Complex& p, long long n) {
    if (n == 0) return Complex(1);
    if (n != kPochInfinity && n > 0) {
        Complex prod(1);
        Complex api = a;
        for (long long i = 0; i < n; ++i) {
            prod *= Complex(1) - api;
            api *= p;
        }
        return prod;
    }
    // Infinite product and the quotient extension both need |p| < 1.
    if (std::abs(p) >= Real(1))
        throw DivergentProduct("(a;p)_inf requires |p| < 1");
    if (n == kPochInfinity) {
        Complex prod(1);
        Complex api = a;
        const Real ap = std::abs(p);
        const int cap = 100000;
        for (int i = 0; i < cap; ++i) {
            prod *= Complex(1) - api;
            api *= p;
            const Real tail = std::abs(api) / (Real(1) - ap);
            if (tail < kTailEpsilon) return prod;
        }
        throw DivergentProduct("(a;p)_inf tail did not certify");
    }
    // n < 0: (a;p)_n = (a;p)_inf / (a p^n; p)_inf.
    const Complex denom = pochhammer(a * cpow_int(p, n), p, kPochInfinity);
    if (denom == Complex(0))
        throw DivergentProduct("(a;p)_n with negative n hit a vanishing factor");
    return pochhammer(a, p, kPochInfinity) / denom;
}

Real growth_majorant(const Complex& z, const Complex& q) {
    check_q(q);
    if (z == Complex(0)) throw NonConvergent("e(z;q) requires z != 0");
    const Complex v = theta_classic(Complex(std::abs(z)), Complex(std::abs(q)));
    return v.real();
}

LaurentSeries tshakaloff(int order, const Complex& q) {
    if (order < 0) throw EmptyWindow("tshakaloff(): order must be >= 0");
    std::vector<Complex> c(static_cast<size_t>(order + 1));
    for (int n = 0; n <= order; ++n) c[static_cast<size_t>(n)] = cpow_int(q, tri(n));
    return LaurentSeries(0, std::move(c));
}

LaurentSeries theta_series(const ThetaKind& kind, const Complex& q, int lo, int hi) {
    check_q(q);
    ThetaKind::Variant v = kind.variant;
    Complex lam(1);
    if (v == ThetaKind::theta_q_lambda) {
        if (kind.lambda == Complex(0)) throw NonConvergent("theta_q_lambda requires lambda != 0");
        v = ThetaKind::thq;
        lam = kind.lambda;
    }
    LaurentSeries f = LaurentSeries::zero(lo, hi);
    const Complex qinv = Complex(1) / q;
    const Complex laminv = Complex(1) / lam;
    for (int n = lo; n <= hi; ++n)
        f.at(n) = cpow_int(qinv, theta_exponent(v, n)) * cpow_int(laminv, n);
    return f;
}

namespace fixtures {

Complex stieltjes_wigert(int n, const Complex& x, const Complex& q) {
    Complex sum(0);
    for (int k = 0; k <= n; ++k) {
        const Complex num = cpow_int(q, static_cast<long long>(k) * k) *
                            cpow_int(-x, k);
        sum += num / (pochhammer(q, q, k) * pochhammer(q, q, n - k));
    }
    return sum;
}

} // namespace fixtures

} // namespace qstokes
