#ifndef QSTOKES_SPECIAL_HPP
#define QSTOKES_SPECIAL_HPP

#include <limits>

#include "qstokes/laurent.hpp"
#include "qstokes/scalar.hpp"

namespace qstokes {

// The two theta variants in use, plus the shifted form theta_q_lambda(z) =
// thq(z/lambda).  `theta` is sum_n q^{-n(n-1)/2} z^n, `thq` is
// sum_n q^{-n(n+1)/2} z^n; they differ by one dilatation step and both vanish
// with simple zeroes exactly on -q^Z.
struct ThetaKind {
    enum Variant { theta, thq, theta_q_lambda } variant = thq;
    Complex lambda{1, 0};

    static ThetaKind make_theta() { return {theta, Complex(1)}; }
    static ThetaKind make_thq() { return {thq, Complex(1)}; }
    static ThetaKind make_shifted(const Complex& lam) { return {theta_q_lambda, lam}; }
};

enum class ThetaMode { series, product };

inline constexpr Real kQMargin = Real(1.1);
inline constexpr Real kTailEpsilon = Real(1e-16);

Complex eval_theta(const ThetaKind& kind, const Complex& z, const Complex& q,
                   ThetaMode mode = ThetaMode::product);

// Convenience wrappers.
Complex theta_classic(const Complex& z, const Complex& q,
                      ThetaMode mode = ThetaMode::product);
Complex theta_q(const Complex& z, const Complex& q,
                ThetaMode mode = ThetaMode::product);
inline Complex theta_q_shifted(const Complex& lambda, const Complex& z, const Complex& q,
                               ThetaMode mode = ThetaMode::product) {
    return eval_theta(ThetaKind::make_shifted(lambda), z, q, mode);
}

inline constexpr long long kPochInfinity = std::numeric_limits<long long>::max();

// (a;p)_n, with the quotient extension for n < 0 and a certified-tail
// infinite product for n = kPochInfinity (requires |p| < 1).
Complex pochhammer(const Complex& a, const Complex& p, long long n);

inline Complex pochhammer_inf(const Complex& a, const Complex& p) {
    return pochhammer(a, p, kPochInfinity);
}

// Growth majorant e(z;q) = theta(|z|;|q|); dominates |theta(z;q)| everywhere.
Real growth_majorant(const Complex& z, const Complex& q);

// Truncation of the Tshakaloff series sum_{n>=0} q^{n(n-1)/2} z^n.
LaurentSeries tshakaloff(int order, const Complex& q);

// Laurent-coefficient windows of the theta variants (exact superexponentially
// decaying data; safe to treat as hard-windowed series).
LaurentSeries theta_series(const ThetaKind& kind, const Complex& q, int lo, int hi);

namespace fixtures {
// Stieltjes-Wiegert polynomial S_n(x;q) = sum_k q^{k^2} (-x)^k /
// ((q;q)_k (q;q)_{n-k}); a finite-sum helper for fixture work with |q| < 1.
Complex stieltjes_wigert(int n, const Complex& x, const Complex& q);
} // namespace fixtures

} // namespace qstokes

#endif
