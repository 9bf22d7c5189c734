#ifndef QSTOKES_NORMAL_FORM_HPP
#define QSTOKES_NORMAL_FORM_HPP

#include "qstokes/module_rep.hpp"
#include "qstokes/reduction.hpp"

namespace qstokes {

inline constexpr int kDefaultOrder = 48;

struct NormalFormResult {
    GaugeTransform F;   // convergent gauge with F[A_V] = A_U up to the order
    BlockModule V;      // normal form: V_{i,j} supported on mu_i..mu_j-1
    Real tail_bound = 0;
    Real condition = 1;
};

// Birkhoff-Guenther normal form by triangular induction on j - i:
//   (F_ij, V_ij) = Red(mu_i, A_i, mu_j, A_j,
//                      U_ij + sum U_il F_lj - sum (sigma_q F_il) V_lj).
NormalFormResult bg_normal_form(const BlockModule& m, int order = kDefaultOrder);

// Truncated formal gauge with Fhat[A_0] = A_U modulo z^{order}, computed
// blockwise by the z-adically contracting fixpoint iteration.  The input must
// be in normal form (polynomial U blocks).
GaugeTransform formal_solution(const BlockModule& m, int order = kDefaultOrder);

// q-Gevrey cutoff normal form: blocks at levels mu_j - mu_i >= 1/s are forced
// to zero (their gauge blocks become truncated formal solutions), smaller
// levels as in bg_normal_form.  s <= 0 means the full BG form; pass
// s = infinity for the pure graded part.
NormalFormResult gevrey_cutoff_form(const BlockModule& m, Real s,
                                    int order = kDefaultOrder);

// Residual of F[A_V] = A_U measured in max coefficient magnitude relative to
// max input magnitude, on the window the truncated gauge supports.
Real gauge_conjugation_residual(const GaugeTransform& F, const BlockModule& target,
                                const BlockModule& normal, int order);

// Count of free scalar coefficients in a normal form (the affine coordinates).
long long free_coefficient_count(const BlockModule& v);

} // namespace qstokes

#endif
