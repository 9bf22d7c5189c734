#ifndef QSTOKES_LAURENT_HPP
#define QSTOKES_LAURENT_HPP

#include <cassert>
#include <optional>
#include <vector>

#include "qstokes/scalar.hpp"

namespace qstokes {

// Two-sided truncated Laurent series.  The window [lo, hi] is the range of
// exponents on which the coefficients are meaningful: below lo the series is
// known to vanish (lo is a hard valuation bound), above hi nothing is known.
//
// Binary operations derive the window on which the result is complete:
// sums intersect, products use [lo1+lo2, min(lo1+hi2, lo2+hi1)].
class LaurentSeries {
public:
    LaurentSeries() = default;

    LaurentSeries(int lo, std::vector<Complex> coeffs)
        : lo_(lo), c_(std::move(coeffs)) {}

    // The zero series tracked on [lo, hi].
    static LaurentSeries zero(int lo, int hi);

    // c * z^n tracked on [lo, hi] (defaults to a window around the monomial).
    static LaurentSeries monomial(const Complex& c, int n, int lo, int hi);
    static LaurentSeries monomial(const Complex& c, int n) {
        return monomial(c, n, n, n);
    }

    // Power-series constructor: coefficients for z^0..z^{k-1}, window [0, hi]
    // (the data is an exact polynomial, so padding with zeros is sound).
    static LaurentSeries poly(std::vector<Complex> coeffs, int hi = -1);

    bool empty() const { return c_.empty(); }
    int lo() const { return lo_; }
    int hi() const { return lo_ + static_cast<int>(c_.size()) - 1; }
    int size() const { return static_cast<int>(c_.size()); }
    bool in_window(int n) const { return !empty() && n >= lo() && n <= hi(); }

    const Complex& at(int n) const {
        assert(in_window(n));
        return c_[static_cast<size_t>(n - lo_)];
    }
    Complex& at(int n) {
        assert(in_window(n));
        return c_[static_cast<size_t>(n - lo_)];
    }
    // Coefficient, with the hard-valuation convention: exact zero below lo,
    // and an error above hi (the caller asked for untracked data).
    Complex coeff(int n) const {
        if (empty()) throw EmptyWindow("coeff() on empty series");
        if (n < lo()) return Complex(0);
        if (n > hi()) throw EmptyWindow("coefficient above tracked window");
        return c_[static_cast<size_t>(n - lo_)];
    }

    Real max_abs() const;

    // Least tracked exponent whose coefficient exceeds
    // kValuationEpsilon * max_abs().  Throws AllBelowThreshold otherwise.
    int valuation() const;
    std::optional<int> try_valuation() const;

    // Restrict to the window intersection with [lo, hi].
    LaurentSeries restricted(int lo, int hi) const;

    // Declare known zeros outside the current window.  Only correct when the
    // series is exact data (a polynomial, a certified truncation).
    LaurentSeries extended(int lo, int hi) const;

    // Multiplication by z^k (shifts the window).
    LaurentSeries shifted(int k) const;

    LaurentSeries operator-() const;

    std::vector<Complex>& data() { return c_; }
    const std::vector<Complex>& data() const { return c_; }

private:
    int lo_ = 0;
    std::vector<Complex> c_;
};

LaurentSeries add(const LaurentSeries& f, const LaurentSeries& g);
LaurentSeries sub(const LaurentSeries& f, const LaurentSeries& g);
LaurentSeries mul(const LaurentSeries& f, const LaurentSeries& g);
LaurentSeries scale(const LaurentSeries& f, const Complex& c);

// Multiplicative inverse: f * invert(f) == 1 on the derivable window.
// Requires a nonzero coefficient at the valuation.
LaurentSeries invert(const LaurentSeries& f);

// f(alpha * z): coefficient n is multiplied by alpha^n.
LaurentSeries rescale_argument(const LaurentSeries& f, const Complex& alpha);

// The dilatation action: coefficient n of sigma_q^k f is q^{kn} f_n.
LaurentSeries sigma_q(const LaurentSeries& f, int k, const Complex& q);

// Evaluation inside the convergence window; the tail estimate from the edge
// terms is added to *tail_report when provided.
Complex eval(const LaurentSeries& f, const Complex& z, Real* tail_report = nullptr);

// Evaluation with an annulus guard: throws PointTooFar when the edge terms
// of the window are not negligible against the largest term, i.e. when the
// declared window cannot certify the value at this point.
Complex eval_checked(const LaurentSeries& f, const Complex& z,
                     Real edge_tolerance = Real(1e-9));

// max |f_n - g_n| over the window intersection.
Real max_abs_diff(const LaurentSeries& f, const LaurentSeries& g);

// Convolution onto an explicit target window, treating coefficients outside
// the tracked windows as exact zeros.  Sound only for certified data (exact
// polynomials, theta-type series whose tails are below the noise floor).
LaurentSeries mul_onto(const LaurentSeries& f, const LaurentSeries& g, int lo, int hi);

inline LaurentSeries operator+(const LaurentSeries& f, const LaurentSeries& g) { return add(f, g); }
inline LaurentSeries operator-(const LaurentSeries& f, const LaurentSeries& g) { return sub(f, g); }
inline LaurentSeries operator*(const LaurentSeries& f, const LaurentSeries& g) { return mul(f, g); }
inline LaurentSeries operator*(const Complex& c, const LaurentSeries& f) { return scale(f, c); }
inline LaurentSeries operator*(const LaurentSeries& f, const Complex& c) { return scale(f, c); }

} // namespace qstokes

#endif
