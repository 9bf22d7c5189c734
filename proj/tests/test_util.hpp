#ifndef QSTOKES_TEST_UTIL_HPP
#define QSTOKES_TEST_UTIL_HPP

#include <random>

#include "qstokes/laurent.hpp"
#include "qstokes/matrix.hpp"

namespace qstokes::testutil {

inline std::mt19937_64 rng(unsigned seed) { return std::mt19937_64(seed); }

inline Complex random_unit(std::mt19937_64& g) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    return Complex(static_cast<Real>(d(g)), static_cast<Real>(d(g)));
}

// Random series with coefficients in the unit box on the given window.
inline LaurentSeries random_series(std::mt19937_64& g, int lo, int hi) {
    LaurentSeries f = LaurentSeries::zero(lo, hi);
    for (int n = lo; n <= hi; ++n) f.at(n) = random_unit(g);
    return f;
}

inline SMat random_smat(std::mt19937_64& g, int rows, int cols, int lo, int hi) {
    SMat m(rows, cols);
    for (auto& e : m.data()) e = random_series(g, lo, hi);
    return m;
}

inline Real rel_err(const Complex& got, const Complex& want) {
    const Real scale = std::max(std::abs(want), Real(1e-30));
    return std::abs(got - want) / scale;
}

} // namespace qstokes::testutil

#endif
