#ifndef QSTOKES_REDUCTION_HPP
#define QSTOKES_REDUCTION_HPP

#include <vector>

#include "qstokes/matrix.hpp"

namespace qstokes {

inline constexpr Real kInvariantTailEpsilon = Real(1e-10);

// Level-d q-Borel weights t_n with t_n = q^{n-d} t_{n-d}: writing n = r + k d
// with 0 <= r < d, t_n = q^{d k(k-1)/2 + r k}.  Level 1 gives q^{n(n-1)/2}.
Complex borel_weight(const Complex& q, int level, long long n);

// Coefficientwise division by the weights.
LaurentSeries q_borel(const LaurentSeries& f, int level, const Complex& q);

// Evaluation of the (entire) level-1 Borel transform at a point.
Complex borel_eval(const LaurentSeries& f, const Complex& xi, const Complex& q);

// The class invariant of the one-level two-slope problem:
//   Bq Y(A^{-1}) = sum_n q^{-n(n-1)/2} A^{-n} Y_n,
// with the largest-|n| term magnitudes reported as the tail bound.
CMat two_slope_invariant(const SMat& Y, const CMat& A, const Complex& q,
                         Real* tail_bound = nullptr,
                         Real tail_tolerance = kInvariantTailEpsilon);

struct RedResult {
    SMat F;             // the reduction datum F_{1,2}
    SMat V;             // polynomial part supported on exponents mu1..mu2-1
    Real tail_bound = 0;        // neglected obstruction tail estimate
    Real condition = 1;         // conditioning of the V-solve
};

// Red(mu1,A1,mu2,A2,U): the unique pair with
//   (sigma_q F) z^{mu2} A2 - z^{mu1} A1 F = U - V,
// V supported on exponents mu1..mu2-1.  Obstructions are the per-residue
// weighted sums 1/t * A1^k (.) A2^{-k}; the recurrence
//   X_n = q^{n-d} A1^{-1} X_{n-d} A2 - Z_n
// is evaluated through its convergent tail form, which satisfies the same
// relation without amplifying roundoff.
RedResult red(int mu1, const CMat& A1, int mu2, const CMat& A2, const SMat& U,
              int order, const Complex& q);

// Residual of the defining relation on the provided window, relative to
// max(|U|, 1).
Real red_residual(int mu1, const CMat& A1, int mu2, const CMat& A2,
                  const SMat& U, const RedResult& r, const Complex& q);

// Independent oracle: dense square linear solve for all coefficients of F up
// to the window horizon together with V, closing the system with a zero
// boundary above the horizon.
RedResult red_dense_oracle(int mu1, const CMat& A1, int mu2, const CMat& A2,
                           const SMat& U, int order, const Complex& q);

} // namespace qstokes

#endif
