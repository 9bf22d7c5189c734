#include "qstokes/module_rep.hpp"

#include <algorithm>
#include <cmath>

namespace qstokes {

Complex reduce_to_fundamental_annulus(const Complex& z, const Complex& q) {
    if (z == Complex(0)) throw ForbiddenDirection("zero is not a point of E_q");
    const Real aq = std::abs(q);
    if (aq <= Real(1)) throw QModulusTooSmall("fundamental annulus needs |q| > 1");
    long long m = static_cast<long long>(std::floor(std::log(std::abs(z)) / std::log(aq)));
    Complex w = z * cpow_int(q, -m);
    while (std::abs(w) >= aq) w /= q;
    while (std::abs(w) < Real(1)) w *= q;
    return w;
}

Direction::Direction(const Complex& rep, const Complex& q)
    : c(reduce_to_fundamental_annulus(rep, q)) {}

bool Direction::same_class(const Direction& other, const Complex& q, Real margin) const {
    for (int m = -1; m <= 1; ++m) {
        const Complex d = c - other.c * cpow_int(q, m);
        if (std::abs(d) <= margin * std::abs(c)) return true;
    }
    return false;
}

bool spectrum_in_fundamental_annulus(const PureBlock& b, const Complex& q) {
    const Real aq = std::abs(q);
    for (const Complex& ev : eigenvalues(b.A)) {
        const Real m = std::abs(ev);
        if (m < Real(1) || m >= aq) return false;
    }
    return true;
}

int BlockModule::rank() const {
    int n = 0;
    for (const auto& b : blocks) n += b.rank();
    return n;
}

int BlockModule::block_offset(int i) const {
    int off = 0;
    for (int k = 0; k < i; ++k) off += blocks[static_cast<size_t>(k)].rank();
    return off;
}

void BlockModule::validate() const {
    if (blocks.empty()) throw SchemaError("module has no blocks");
    for (size_t i = 0; i + 1 < blocks.size(); ++i)
        if (blocks[i].mu >= blocks[i + 1].mu)
            throw SchemaError("slopes must be strictly increasing");
    for (const auto& b : blocks) {
        if (b.A.rows() != b.A.cols() || b.A.rows() == 0)
            throw SchemaError("diagonal block is not square");
        if (condition_number(b.A) > Real(1e12))
            throw SchemaError("diagonal block is numerically singular");
    }
    for (const auto& [ij, u] : U) {
        const auto [i, j] = ij;
        if (i < 0 || j <= i || j >= block_count())
            throw SchemaError("U index out of range");
        if (u.rows() != blocks[static_cast<size_t>(i)].rank() ||
            u.cols() != blocks[static_cast<size_t>(j)].rank())
            throw SchemaError("U block has wrong shape");
    }
}

SMat assemble_diagonal(const BlockModule& m, int lo, int hi) {
    const int n = m.rank();
    SMat a = smat_zero(n, n, lo, hi);
    for (int b = 0; b < m.block_count(); ++b) {
        const auto& blk = m.blocks[static_cast<size_t>(b)];
        const int off = m.block_offset(b);
        for (int i = 0; i < blk.rank(); ++i)
            for (int j = 0; j < blk.rank(); ++j)
                a(off + i, off + j) = LaurentSeries::monomial(blk.A(i, j), blk.mu, lo, hi);
    }
    return a;
}

// Module/gauge data is exact (Laurent polynomials or certified series), so
// assembling onto a wider window pads with true zeros.
SMat assemble(const BlockModule& m, int lo, int hi) {
    SMat a = assemble_diagonal(m, lo, hi);
    for (const auto& [ij, u] : m.U) {
        const auto [bi, bj] = ij;
        const int ro = m.block_offset(bi), co = m.block_offset(bj);
        for (int i = 0; i < u.rows(); ++i)
            for (int j = 0; j < u.cols(); ++j)
                a(ro + i, co + j) = u(i, j).extended(lo, hi).restricted(lo, hi);
    }
    return a;
}

SMat assemble(const GaugeTransform& f, int lo, int hi) {
    int n = 0;
    for (int r : f.ranks) n += r;
    SMat a = smat_identity(n, lo, hi);
    std::vector<int> off(f.ranks.size() + 1, 0);
    for (size_t k = 0; k < f.ranks.size(); ++k)
        off[k + 1] = off[k] + f.ranks[k];
    for (const auto& [ij, blk] : f.F) {
        const auto [bi, bj] = ij;
        // Gauge blocks carry genuine truncation on the high side: extend only
        // the hard-valuation low side, keep their own horizon.
        for (int i = 0; i < blk.rows(); ++i)
            for (int j = 0; j < blk.cols(); ++j)
                a(off[static_cast<size_t>(bi)] + i, off[static_cast<size_t>(bj)] + j) =
                    blk(i, j).extended(lo, blk(i, j).hi()).restricted(lo, hi);
    }
    return a;
}

SMat gauge_apply(const SMat& F, const SMat& A, const Complex& q) {
    SMat finv;
    try {
        finv = invert(F);
    } catch (const NonInvertible& e) {
        throw NonInvertibleGauge(e.what());
    }
    return sigma_q(F, 1, q) * A * finv;
}

long long moduli_dimension(const BlockModule& m) {
    long long dim = 0;
    for (int i = 0; i < m.block_count(); ++i)
        for (int j = i + 1; j < m.block_count(); ++j)
            dim += static_cast<long long>(m.blocks[static_cast<size_t>(i)].rank()) *
                   m.blocks[static_cast<size_t>(j)].rank() *
                   (m.blocks[static_cast<size_t>(j)].mu - m.blocks[static_cast<size_t>(i)].mu);
    return dim;
}

std::vector<Direction> resonance_set(const BlockModule& m, Real tolerance) {
    m.validate();
    const Complex q = m.q;
    std::vector<Direction> out;
    auto push_unique = [&](const Direction& d) {
        for (const auto& e : out)
            if (e.same_class(d, q, tolerance * 10 + kResonanceMargin)) return;
        out.push_back(d);
    };
    for (int i = 0; i < m.block_count(); ++i) {
        const auto evi = eigenvalues(m.blocks[static_cast<size_t>(i)].A);
        for (int j = i + 1; j < m.block_count(); ++j) {
            const auto evj = eigenvalues(m.blocks[static_cast<size_t>(j)].A);
            const int d = m.blocks[static_cast<size_t>(j)].mu - m.blocks[static_cast<size_t>(i)].mu;
            for (const Complex& alpha : evi)
                for (const Complex& beta : evj) {
                    // a^d = q^mm * alpha/beta; one m per residue class mod d and
                    // all d-th roots give every spiral of solutions.
                    const Complex ratio = alpha / beta;
                    for (int mm = 0; mm < d; ++mm) {
                        const Complex base = ratio * cpow_int(q, mm);
                        const Real mag = std::pow(std::abs(base), Real(1) / d);
                        const Real ang = std::arg(base) / d;
                        for (int t = 0; t < d; ++t) {
                            const Real phi = ang + Real(2) * Real(M_PI) * t / d;
                            const Complex a(mag * std::cos(phi), mag * std::sin(phi));
                            push_unique(Direction(-a, q));
                        }
                    }
                }
        }
    }
    std::sort(out.begin(), out.end(), [](const Direction& x, const Direction& y) {
        if (x.c.real() != y.c.real()) return x.c.real() < y.c.real();
        return x.c.imag() < y.c.imag();
    });
    return out;
}

bool is_generic(const Direction& c, const BlockModule& m, Real margin) {
    const Complex q = m.q;
    const Real logq = std::log(std::abs(q));
    for (int i = 0; i < m.block_count(); ++i) {
        const auto evi = eigenvalues(m.blocks[static_cast<size_t>(i)].A);
        for (int j = i + 1; j < m.block_count(); ++j) {
            const auto evj = eigenvalues(m.blocks[static_cast<size_t>(j)].A);
            const int d = m.blocks[static_cast<size_t>(j)].mu - m.blocks[static_cast<size_t>(i)].mu;
            const Complex cd = cpow_int(c.c, d);
            for (const Complex& alpha : evi)
                for (const Complex& beta : evj) {
                    const Complex w = cd * beta / alpha;
                    // w in q^Z?  Bounded exponent scan with slack 2.
                    const long long m0 =
                        static_cast<long long>(std::llround(std::log(std::abs(w)) / logq));
                    for (long long mm = m0 - 2; mm <= m0 + 2; ++mm) {
                        const Complex qm = cpow_int(q, mm);
                        if (std::abs(w - qm) <= margin * std::abs(qm)) return false;
                    }
                }
        }
    }
    return true;
}

} // namespace qstokes
