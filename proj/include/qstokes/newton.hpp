#ifndef QSTOKES_NEWTON_HPP
#define QSTOKES_NEWTON_HPP

#include <map>
#include <numeric>
#include <vector>

#include "qstokes/matrix.hpp"

namespace qstokes {

// Exact rational slope d/r, always kept reduced with r > 0.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d);

    bool is_integral() const { return den == 1; }
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator<(const Rational& o) const {
        return static_cast<long double>(num) * o.den < static_cast<long double>(o.num) * den;
    }
};

Rational operator+(const Rational& a, const Rational& b);
Rational rational_scaled(const Rational& a, long long k);

// P = sum_i a_i sigma_q^i with Laurent-series coefficients; degrees with an
// absent or negligible coefficient are simply not tracked.
struct QDiffOperator {
    std::map<int, LaurentSeries> coeffs;
    Complex q{2, 0};

    int degree() const { return coeffs.empty() ? -1 : coeffs.rbegin()->first; }
    int min_degree() const { return coeffs.empty() ? 0 : coeffs.begin()->first; }
};

// Apply P to a series: P.f = sum a_i sigma_q^i f.
LaurentSeries apply(const QDiffOperator& P, const LaurentSeries& f);

// Operator product (twisted by sigma^i acting on the right factor's
// coefficients).
QDiffOperator mul(const QDiffOperator& P, const QDiffOperator& Q);

struct NewtonPolygon {
    // (slope, multiplicity) with strictly increasing slopes.
    std::vector<std::pair<Rational, int>> slopes;

    bool all_integral() const {
        for (const auto& s : slopes)
            if (!s.first.is_integral()) return false;
        return true;
    }
};

// Lower convex hull of the integer points (i, v0(a_i)); exact integer
// arithmetic, no floating point in the hull.
NewtonPolygon newton_polygon(const QDiffOperator& P);

// Sum over positive slopes of slope * multiplicity.
Rational irregularity(const NewtonPolygon& np);

enum class IndexSetting { formal, convergent };

// Index of P: K -> K: zero formally, minus the irregularity in the
// convergent setting.  Integral slopes only.
long long index(const QDiffOperator& P, IndexSetting setting);

// Companion matrix of the unitary form: sub-identity band, last row
// -a_j / a_n.  The operator must have min degree 0 and invertible a_n.
SMat companion(const QDiffOperator& P);

// The three operator identities relating the scalar complex of P with the
// companion complex: (pi1,Pi) o (V,I) = id, V o pi1 - Id = D' o D,
// I o Pi - Id = D o D'.  Evaluated on the given probe series.
struct HomotopyReport {
    Real round_trip = 0;   // (pi1,Pi) o (V,I) vs identity
    Real left_identity = 0;  // V o pi1 - Id vs D' o D
    Real right_identity = 0; // I o Pi - Id vs D o D'
    Real max_residual() const;
};

HomotopyReport homotopy_check(const QDiffOperator& P,
                              const std::vector<LaurentSeries>& probes,
                              Real fail_threshold = Real(-1));

} // namespace qstokes

#endif
