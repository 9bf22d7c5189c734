#ifndef QSTOKES_MODULE_REP_HPP
#define QSTOKES_MODULE_REP_HPP

#include <map>
#include <utility>
#include <vector>

#include "qstokes/matrix.hpp"

namespace qstokes {

inline constexpr Real kEigTolerance = Real(1e-9);
inline constexpr Real kResonanceMargin = Real(1e-6);

// A point of E_q = C*/q^Z held as its fundamental-annulus representative
// (1 <= |c| < |q|, reduced with the principal log; ties at |c| = |q| reduce
// downward).
struct Direction {
    Complex c{1, 0};

    Direction() = default;
    Direction(const Complex& rep, const Complex& q);

    bool same_class(const Direction& other, const Complex& q,
                    Real margin = kResonanceMargin) const;
};

Complex reduce_to_fundamental_annulus(const Complex& z, const Complex& q);

// Pure isoclinic block z^mu * A with A constant invertible.
struct PureBlock {
    int mu = 0;
    CMat A;
    int rank() const { return A.rows(); }
};

// Optional normalization check: every eigenvalue inside 1 <= |l| < |q|.
bool spectrum_in_fundamental_annulus(const PureBlock& b, const Complex& q);

// Block upper-triangular module with pure integral-slope diagonal and series
// blocks U_{i,j} above it.
struct BlockModule {
    Complex q{2, 0};
    std::vector<PureBlock> blocks;
    std::map<std::pair<int, int>, SMat> U; // (i,j), i<j

    int block_count() const { return static_cast<int>(blocks.size()); }
    int rank() const;
    int block_offset(int i) const;
    void validate() const; // slope ordering, shapes, invertibility
    bool has_u(int i, int j) const { return U.count({i, j}) != 0; }
    const SMat& u(int i, int j) const { return U.at({i, j}); }
};

// Block-unipotent gauge transform (identity diagonal).
struct GaugeTransform {
    std::vector<int> ranks;
    std::map<std::pair<int, int>, SMat> F;

    bool has(int i, int j) const { return F.count({i, j}) != 0; }
    const SMat& at(int i, int j) const { return F.at({i, j}); }
};

// Assembled matrices on a common window.
SMat assemble_diagonal(const BlockModule& m, int lo, int hi);     // A_0
SMat assemble(const BlockModule& m, int lo, int hi);              // A_U
SMat assemble(const GaugeTransform& f, int lo, int hi);

// The gauge action F[A] := (sigma_q F) A F^{-1}.
SMat gauge_apply(const SMat& F, const SMat& A, const Complex& q);

// Dimension of the space of classes: sum over i<j of r_i r_j (mu_j - mu_i).
long long moduli_dimension(const BlockModule& m);

// Forbidden pole-spiral classes p(-a), where a runs over the solutions of
// q^Z a^{mu_i} Sp(A_i) meeting q^Z a^{mu_j} Sp(A_j); fundamental-annulus
// representatives, deduplicated.  A direction c is generic exactly when
// c^{mu_j - mu_i} stays off every q^Z * (alpha_i / alpha_j).
std::vector<Direction> resonance_set(const BlockModule& m,
                                     Real tolerance = kEigTolerance);

bool is_generic(const Direction& c, const BlockModule& m,
                Real margin = kResonanceMargin);

} // namespace qstokes

#endif
