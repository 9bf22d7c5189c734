#ifndef QSTOKES_SUMMATION_HPP
#define QSTOKES_SUMMATION_HPP

#include <functional>
#include <map>
#include <vector>

#include "qstokes/module_rep.hpp"
#include "qstokes/special.hpp"

namespace qstokes {

inline constexpr int kDefaultWindow = 64;

// Weighted finite sum of q-spirals on E_q; representatives reduced to the
// fundamental annulus and ordered by modulus.
struct Divisor {
    struct Term {
        Complex lambda;
        int nu = 1;
    };
    std::vector<Term> terms;

    static Divisor single(const Complex& lambda, int nu, const Complex& q);
    static Divisor make(std::vector<Term> raw, const Complex& q);

    int degree() const;                       // |Lambda| = sum nu_i
    Complex weight(const Complex& q) const;   // (-1)^{|L|} prod lambda^nu mod q^Z
};

// d_q(z, Lambda) = prod_j (inf over the spiral of |1 - z/xi|)^{nu_j}.
Real dq_distance(const Complex& z, const Divisor& divisor, const Complex& q);
Real dq_distance(const Complex& z, const Complex& lambda, const Complex& q);

// ---------------------------------------------------------------------------
// Scalar q-Euler summation: the equation a z sigma_q f - f = u.
// The sum in direction lambda is (1/theta_{q,lambda}) sum_n
// [u theta_{q,lambda}]_n / (a lambda q^n - 1) z^n, with simple poles on
// [-lambda; q]; it equals the spiral sum over mu in [lambda;q] of
// Bq u(mu) / ((a mu - 1) theta_{q,mu}(z)).
// ---------------------------------------------------------------------------
struct QEulerSum {
    Complex q;
    Complex a;
    Complex lambda;
    LaurentSeries numerator; // g with f = g / theta_{q,lambda}

    Complex eval(const Complex& z) const;
    // Independent evaluation path through the spiral form.
    Complex eval_spiral(const LaurentSeries& u, const Complex& z) const;
};

QEulerSum q_euler_sum(const Complex& a, const LaurentSeries& u, const Complex& lambda,
                      const Complex& q, int window = kDefaultWindow);

// ---------------------------------------------------------------------------
// Meromorphic sums: numerator Laurent data over a product of theta powers.
// ---------------------------------------------------------------------------
struct ThetaDenominator {
    Complex lambda; // theta_{q,lambda}
    int power = 0;
};

struct MeromorphicBlock {
    SMat num;                               // convergent two-sided windows
    std::vector<ThetaDenominator> denom;    // product of theta_{q,l}^p

    CMat eval(const Complex& z, const Complex& q) const;
};

// The summed gauge: block-unipotent with meromorphic blocks.
struct MeromorphicSum {
    Complex q;
    Direction c;
    std::vector<int> ranks;
    std::vector<int> mus;
    std::map<std::pair<int, int>, MeromorphicBlock> blocks;

    int rank() const;
    CMat eval(const Complex& z) const;           // assembled F_c(z)
    CMat eval_inverse(const Complex& z) const;   // unipotent polynomial inverse
};

// Algebraic summation: the unique meromorphic gauge F_c with F_c[A_0] = A_U
// and pole divisor >= -(mu_j - mu_i)[-c] per block, computed through the
// theta twist and per-coefficient Sylvester solves.
MeromorphicSum algebraic_sum(const BlockModule& m, const Direction& c,
                             int window = kDefaultWindow);

// Residual |sigma_q F_c . A_0 - A_U . F_c| / scale at a point.
Real summation_residual(const MeromorphicSum& f, const BlockModule& m, const Complex& z);

// ---------------------------------------------------------------------------
// Constructive Borel-Ritt sum along a divisor.
// ---------------------------------------------------------------------------
struct BorelRittSum {
    Complex q;
    Divisor divisor;
    LaurentSeries F;    // sum_{l <= N0} c_l z^l
    int n0 = 0;

    Complex eval(const Complex& z) const;           // F(z) / theta_Lambda(z)
    Complex eval_theta_divisor(const Complex& z) const;
};

// Laurent coefficients of theta_Lambda = prod theta(-z/lambda_j)^{nu_j}.
LaurentSeries theta_divisor_series(const Divisor& divisor, const Complex& q,
                                   int lo, int hi);

BorelRittSum borel_ritt_sum(const LaurentSeries& ghat, const Divisor& divisor,
                            int n0, const Complex& q, int window = kDefaultWindow);

// ---------------------------------------------------------------------------
// Asymptotic-expansion check of level nu along a divisor.
// ---------------------------------------------------------------------------
struct AsymptoticReport {
    bool pass = false;
    Real fitted_c = 0;
    Real fitted_a = 0;
    std::vector<Real> ratios; // per truncation order N
};

AsymptoticReport asymptotic_check(const std::function<Complex(const Complex&)>& f,
                                  const LaurentSeries& fhat, const Divisor& poles,
                                  int nu, const std::vector<Complex>& samples,
                                  const Complex& q, int n_max = 12,
                                  Real a_cap = Real(1e6));

} // namespace qstokes

#endif
