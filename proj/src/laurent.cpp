#include "qstokes/laurent.hpp"

#include <algorithm>
#include <cmath>

namespace qstokes {

LaurentSeries LaurentSeries::zero(int lo, int hi) {
    if (hi < lo) throw EmptyWindow("zero(): hi < lo");
    return LaurentSeries(lo, std::vector<Complex>(static_cast<size_t>(hi - lo + 1)));
}

LaurentSeries LaurentSeries::monomial(const Complex& c, int n, int lo, int hi) {
    if (n < lo || n > hi) throw EmptyWindow("monomial(): exponent outside window");
    LaurentSeries f = zero(lo, hi);
    f.at(n) = c;
    return f;
}

LaurentSeries LaurentSeries::poly(std::vector<Complex> coeffs, int hi) {
    if (coeffs.empty()) coeffs.push_back(Complex(0));
    LaurentSeries f(0, std::move(coeffs));
    if (hi > f.hi()) return f.extended(0, hi);
    return f;
}

Real LaurentSeries::max_abs() const {
    Real m = 0;
    for (const auto& z : c_) m = std::max(m, std::abs(z));
    return m;
}

std::optional<int> LaurentSeries::try_valuation() const {
    if (empty()) return std::nullopt;
    const Real threshold = kValuationEpsilon * max_abs();
    for (int n = lo(); n <= hi(); ++n)
        if (std::abs(at(n)) > threshold) return n;
    return std::nullopt;
}

int LaurentSeries::valuation() const {
    auto v = try_valuation();
    if (!v) throw AllBelowThreshold("valuation(): all coefficients below threshold");
    return *v;
}

LaurentSeries LaurentSeries::restricted(int lo, int hi) const {
    const int nlo = std::max(lo, this->lo());
    const int nhi = std::min(hi, this->hi());
    if (empty() || nhi < nlo) throw EmptyWindow("restricted(): empty intersection");
    return LaurentSeries(nlo, std::vector<Complex>(c_.begin() + (nlo - lo_),
                                                   c_.begin() + (nhi - lo_ + 1)));
}

LaurentSeries LaurentSeries::extended(int lo, int hi) const {
    if (empty()) return zero(lo, hi);
    const int nlo = std::min(lo, this->lo());
    const int nhi = std::max(hi, this->hi());
    LaurentSeries f = zero(nlo, nhi);
    for (int n = this->lo(); n <= this->hi(); ++n) f.at(n) = at(n);
    return f;
}

LaurentSeries LaurentSeries::shifted(int k) const {
    LaurentSeries f = *this;
    f.lo_ += k;
    return f;
}

LaurentSeries LaurentSeries::operator-() const {
    LaurentSeries f = *this;
    for (auto& z : f.c_) z = -z;
    return f;
}

LaurentSeries add(const LaurentSeries& f, const LaurentSeries& g) {
    if (f.empty() || g.empty()) throw EmptyWindow("add(): empty operand");
    const int lo = std::max(f.lo(), g.lo());
    const int hi = std::min(f.hi(), g.hi());
    if (hi < lo) throw EmptyWindow("add(): windows do not overlap");
    LaurentSeries r = LaurentSeries::zero(lo, hi);
    for (int n = lo; n <= hi; ++n) r.at(n) = f.coeff(n) + g.coeff(n);
    return r;
}

LaurentSeries sub(const LaurentSeries& f, const LaurentSeries& g) {
    return add(f, -g);
}

LaurentSeries mul(const LaurentSeries& f, const LaurentSeries& g) {
    if (f.empty() || g.empty()) throw EmptyWindow("mul(): empty operand");
    const int lo = f.lo() + g.lo();
    const int hi = std::min(f.lo() + g.hi(), g.lo() + f.hi());
    if (hi < lo) throw EmptyWindow("mul(): derived window is empty");
    LaurentSeries r = LaurentSeries::zero(lo, hi);
    for (int n = lo; n <= hi; ++n) {
        Complex s(0);
        const int kmin = std::max(f.lo(), n - g.hi());
        const int kmax = std::min(f.hi(), n - g.lo());
        for (int k = kmin; k <= kmax; ++k) s += f.at(k) * g.at(n - k);
        r.at(n) = s;
    }
    return r;
}

LaurentSeries scale(const LaurentSeries& f, const Complex& c) {
    LaurentSeries r = f;
    for (auto& z : r.data()) z *= c;
    return r;
}

LaurentSeries invert(const LaurentSeries& f) {
    if (f.empty()) throw EmptyWindow("invert(): empty operand");
    auto vopt = f.try_valuation();
    if (!vopt) throw NonInvertible("invert(): no coefficient above threshold");
    const int v = *vopt;
    const int m = f.hi() - v; // number of determined orders beyond the leading one
    const Complex lead = f.at(v);
    std::vector<Complex> b(static_cast<size_t>(m + 1));
    b[0] = Complex(1) / lead;
    for (int n = 1; n <= m; ++n) {
        Complex s(0);
        for (int k = 1; k <= n; ++k) s += f.at(v + k) * b[static_cast<size_t>(n - k)];
        b[static_cast<size_t>(n)] = -s / lead;
    }
    return LaurentSeries(-v, std::move(b));
}

LaurentSeries rescale_argument(const LaurentSeries& f, const Complex& alpha) {
    if (f.empty()) throw EmptyWindow("rescale_argument(): empty operand");
    LaurentSeries r = f;
    for (int n = r.lo(); n <= r.hi(); ++n) r.at(n) *= cpow_int(alpha, n);
    return r;
}

LaurentSeries sigma_q(const LaurentSeries& f, int k, const Complex& q) {
    if (q == Complex(0)) throw QModulusTooSmall("sigma_q(): q must be nonzero");
    return rescale_argument(f, cpow_int(q, k));
}

Complex eval(const LaurentSeries& f, const Complex& z, Real* tail_report) {
    if (f.empty()) throw EmptyWindow("eval(): empty series");
    if (z == Complex(0)) {
        if (f.lo() > 0) return Complex(0);
        if (f.lo() == 0) return f.at(0);
        throw PoleHit("eval(): series has tracked negative exponents at z = 0");
    }
    Complex s(0);
    const Complex zl = cpow_int(z, f.lo());
    Complex p = zl;
    for (int n = f.lo(); n <= f.hi(); ++n) {
        s += f.at(n) * p;
        p *= z;
    }
    if (tail_report) {
        const Real az = std::abs(z);
        const Real edge_lo = std::abs(f.at(f.lo())) * std::abs(zl);
        const Real edge_hi = std::abs(f.at(f.hi())) * std::abs(zl) * rpow_int(az, f.hi() - f.lo());
        *tail_report += edge_lo + edge_hi;
    }
    require_finite(s, "eval(): non-finite result");
    return s;
}

LaurentSeries mul_onto(const LaurentSeries& f, const LaurentSeries& g, int lo, int hi) {
    if (hi < lo) throw EmptyWindow("mul_onto(): empty target");
    if (f.empty() || g.empty()) throw EmptyWindow("mul_onto(): empty operand");
    LaurentSeries r = LaurentSeries::zero(lo, hi);
    for (int n = lo; n <= hi; ++n) {
        Complex s(0);
        const int kmin = std::max(f.lo(), n - g.hi());
        const int kmax = std::min(f.hi(), n - g.lo());
        for (int k = kmin; k <= kmax; ++k) s += f.at(k) * g.at(n - k);
        r.at(n) = s;
    }
    return r;
}

Complex eval_checked(const LaurentSeries& f, const Complex& z, Real edge_tolerance) {
    if (f.empty()) throw EmptyWindow("eval_checked(): empty series");
    Complex s(0);
    Real peak = 0, edge = 0;
    Complex p = cpow_int(z, f.lo());
    for (int n = f.lo(); n <= f.hi(); ++n) {
        const Complex term = f.at(n) * p;
        s += term;
        const Real mag = std::abs(term);
        peak = std::max(peak, mag);
        if (n == f.lo() || n == f.hi()) edge = std::max(edge, mag);
        p *= z;
    }
    if (peak > Real(0) && edge > edge_tolerance * peak)
        throw PointTooFar("eval_checked(): window edges contribute at relative level " +
                          std::to_string(static_cast<double>(edge / peak)));
    require_finite(s, "eval_checked(): non-finite result");
    return s;
}

Real max_abs_diff(const LaurentSeries& f, const LaurentSeries& g) {
    const int lo = std::max(f.lo(), g.lo());
    const int hi = std::min(f.hi(), g.hi());
    if (hi < lo) throw EmptyWindow("max_abs_diff(): windows do not overlap");
    Real m = 0;
    for (int n = lo; n <= hi; ++n) m = std::max(m, std::abs(f.at(n) - g.at(n)));
    return m;
}

} // namespace qstokes
