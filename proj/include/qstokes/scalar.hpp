#ifndef QSTOKES_SCALAR_HPP
#define QSTOKES_SCALAR_HPP

#include <cmath>
#include <complex>
#include <cstdint>

#include "qstokes/errors.hpp"

namespace qstokes {

// The scalar kernel.  Precision is a single build-time parameter; the
// default is hardware double.
#ifdef QSTOKES_LONG_DOUBLE
using Real = long double;
#else
using Real = double;
#endif

using Complex = std::complex<Real>;

inline constexpr Real kValuationEpsilon = Real(1e-13);

inline bool is_finite(Real x) { return std::isfinite(x); }
inline bool is_finite(const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline void require_finite(const Complex& z, const char* where) {
    if (!is_finite(z)) throw NonFinite(where);
}

// Integer power by binary exponentiation.  Keeps powers of exact binary
// scalars (q = 2) exact, which plain std::pow(complex, real) does not.
inline Complex cpow_int(const Complex& base, long long n) {
    if (n == 0) return Complex(1);
    Complex b = base;
    long long m = n;
    if (m < 0) {
        b = Complex(1) / b;
        m = -m;
    }
    Complex acc(1);
    while (m > 0) {
        if (m & 1) acc *= b;
        b *= b;
        m >>= 1;
    }
    return acc;
}

inline Real rpow_int(Real base, long long n) {
    Real b = base;
    long long m = n;
    if (m == 0) return Real(1);
    if (m < 0) {
        b = Real(1) / b;
        m = -m;
    }
    Real acc(1);
    while (m > 0) {
        if (m & 1) acc *= b;
        b *= b;
        m >>= 1;
    }
    return acc;
}

// Exponent n(n-1)/2 of the level-1 q-Borel weights, as a 64-bit integer.
inline long long tri(long long n) { return n * (n - 1) / 2; }

} // namespace qstokes

#endif
