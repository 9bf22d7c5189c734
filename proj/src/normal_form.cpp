#include "qstokes/normal_form.hpp"

#include <climits>

#include <algorithm>
#include <cmath>

namespace qstokes {

namespace {

// RHS of the (i,j) cell in the triangular induction:
//   U_ij + sum_l U_il F_lj - sum_l (sigma_q F_il) V_lj.
SMat induction_rhs(const BlockModule& m, const GaugeTransform& F,
                   const std::map<std::pair<int, int>, SMat>& V, int i, int j,
                   int lo, int hi, const Complex& q) {
    const int ri = m.blocks[static_cast<size_t>(i)].rank();
    const int rj = m.blocks[static_cast<size_t>(j)].rank();
    SMat rhs = m.has_u(i, j) ? extended(m.u(i, j), lo, hi) : smat_zero(ri, rj, lo, hi);
    for (int l = i + 1; l < j; ++l) {
        if (m.has_u(i, l) && F.has(l, j)) {
            SMat t = extended(m.u(i, l), lo, hi) * F.at(l, j);
            rhs = rhs + extended(t, lo, t.data()[0].hi());
        }
        if (F.has(i, l) && V.count({l, j})) {
            SMat t = sigma_q(F.at(i, l), 1, q) * extended(V.at({l, j}), lo, hi);
            rhs = rhs - extended(t, lo, t.data()[0].hi());
        }
    }
    return rhs;
}

// Unique truncated formal solution of
// (sigma_q X) z^{mu2} A2 - z^{mu1} A1 X = RHS, by the z-adically contracting
// forward recurrence X_m = q^{m-d} A1^{-1} X_{m-d} A2 - Z_m.
SMat formal_block_solve(int mu1, const CMat& A1, int mu2, const CMat& A2,
                        const SMat& rhs, int order, const Complex& q) {
    const int d = mu2 - mu1;
    if (d < 1) throw NonIntegralSlopes("formal_block_solve(): needs mu1 < mu2");
    const CMat a1_inv = inverse(A1);
    int rlo = INT_MAX, rhi = INT_MAX;
    for (const auto& e : rhs.data()) {
        rlo = std::min(rlo, e.lo());
        rhi = std::min(rhi, e.hi());
    }
    const int mlo = rlo - mu1;
    const int mhi = std::min(order, rhi) - mu1;
    if (mhi < mlo) throw OrderTooSmall("formal_block_solve(): window exhausted");
    SMat x = smat_zero(A1.rows(), A2.rows(), mlo, mhi);
    for (int m = mlo; m <= mhi; ++m) {
        CMat xm = Complex(-1) * (a1_inv * coeff(rhs, m + mu1));
        if (m - d >= mlo) xm = xm + cpow_int(q, m - d) * (a1_inv * coeff(x, m - d) * A2);
        for (int i = 0; i < xm.rows(); ++i)
            for (int j = 0; j < xm.cols(); ++j) x(i, j).at(m) = xm(i, j);
    }
    return x;
}

NormalFormResult normal_form_impl(const BlockModule& m, int order, Real gevrey_s) {
    m.validate();
    const Complex q = m.q;
    const int k = m.block_count();
    const int mu_lo = m.blocks.front().mu;
    const int mu_hi = m.blocks.back().mu;
    // Work with enough headroom that every composed window still reaches the
    // requested order after the products shrink it.
    const int spread = std::max(mu_hi, 0) - std::min(mu_lo, 0) + 2;
    const int big = order + (k - 1) * spread + 2;
    const int wlo = std::min(0, mu_lo) - 1;

    NormalFormResult out;
    out.F.ranks.resize(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) out.F.ranks[static_cast<size_t>(i)] = m.blocks[static_cast<size_t>(i)].rank();
    out.V.q = q;
    out.V.blocks = m.blocks;

    for (int span = 1; span < k; ++span) {
        for (int i = 0; i + span < k; ++i) {
            const int j = i + span;
            const auto& bi = m.blocks[static_cast<size_t>(i)];
            const auto& bj = m.blocks[static_cast<size_t>(j)];
            const SMat rhs = induction_rhs(m, out.F, out.V.U, i, j, wlo, big, q);
            int rhi = INT_MAX;
            for (const auto& e : rhs.data()) rhi = std::min(rhi, e.hi());
            const int cell_order = rhi;
            if (cell_order < order) throw OrderTooSmall("normal form: window exhausted");
            const int level = bj.mu - bi.mu;
            const bool cutoff = gevrey_s > Real(0) && Real(level) * gevrey_s >= Real(1);
            if (cutoff) {
                // Divergent coefficients grow like |q|^{m^2/(2 level)}: cap the
                // horizon so the truncation stays representable.
                const int cap = std::min(cell_order, order + spread);
                out.F.F[{i, j}] = formal_block_solve(bi.mu, bi.A, bj.mu, bj.A, rhs, cap, q);
                // level killed: V_ij stays absent (zero)
            } else {
                RedResult r = red(bi.mu, bi.A, bj.mu, bj.A, rhs, cell_order, q);
                out.F.F[{i, j}] = r.F;
                out.V.U[{i, j}] = r.V;
                out.tail_bound = std::max(out.tail_bound, r.tail_bound);
                out.condition = std::max(out.condition, r.condition);
            }
        }
    }
    return out;
}

} // namespace

NormalFormResult bg_normal_form(const BlockModule& m, int order) {
    return normal_form_impl(m, order, Real(0));
}

NormalFormResult gevrey_cutoff_form(const BlockModule& m, Real s, int order) {
    return normal_form_impl(m, order, s);
}

GaugeTransform formal_solution(const BlockModule& m, int order) {
    m.validate();
    const Complex q = m.q;
    const int k = m.block_count();
    const int mu_lo = m.blocks.front().mu;
    const int mu_hi = m.blocks.back().mu;
    const int spread = std::max(mu_hi, 0) - std::min(mu_lo, 0) + 2;
    const int big = order + (k - 1) * spread + 2;
    const int wlo = std::min(0, mu_lo) - 1;
    for (const auto& [ij, u] : m.U) {
        const int mu_i = m.blocks[static_cast<size_t>(ij.first)].mu;
        for (const auto& e : u.data())
            if (!e.empty() && e.try_valuation() && *e.try_valuation() < mu_i)
                throw SchemaError("formal_solution(): input must be in normal form");
    }

    GaugeTransform F;
    F.ranks.resize(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) F.ranks[static_cast<size_t>(i)] = m.blocks[static_cast<size_t>(i)].rank();

    for (int span = 1; span < k; ++span) {
        for (int i = 0; i + span < k; ++i) {
            const int j = i + span;
            const auto& bi = m.blocks[static_cast<size_t>(i)];
            const auto& bj = m.blocks[static_cast<size_t>(j)];
            // RHS = U_ij + sum_l U_il F_lj (conjugation against the pure part).
            SMat rhs = m.has_u(i, j) ? extended(m.u(i, j), wlo, big)
                                     : smat_zero(bi.rank(), bj.rank(), wlo, big);
            for (int l = i + 1; l < j; ++l)
                if (m.has_u(i, l) && F.has(l, j)) {
                    SMat t = extended(m.u(i, l), wlo, big) * F.at(l, j);
                    rhs = rhs + extended(t, wlo, t.data()[0].hi());
                }
            int rhi = INT_MAX;
            for (const auto& e : rhs.data()) rhi = std::min(rhi, e.hi());
            F.F[{i, j}] = formal_block_solve(bi.mu, bi.A, bj.mu, bj.A, rhs,
                                             std::min(rhi, order + spread), q);
        }
    }
    return F;
}

Real gauge_conjugation_residual(const GaugeTransform& F, const BlockModule& target,
                                const BlockModule& normal, int order) {
    const Complex q = target.q;
    int wlo = std::min(0, target.blocks.front().mu) - 1;
    for (const auto& [ij, u] : target.U)
        for (const auto& e : u.data()) wlo = std::min(wlo, e.lo());
    const SMat au = assemble(target, wlo, order);
    const SMat av = assemble(normal, wlo, order);
    const SMat g = assemble(F, wlo, order);
    // F[A_V] = A_U  <=>  (sigma_q F) A_V = A_U F.  Divergent gauges make the
    // coefficient magnitudes q-Gevrey and the identity value at a coefficient
    // can sit far below the terms that cancel to produce it, so the residual
    // is normalized by the absolute-value convolution of each side.
    auto absify = [](SMat m) {
        for (auto& e : m.data())
            for (auto& z : e.data()) z = Complex(std::abs(z), 0);
        return m;
    };
    const SMat sg = sigma_q(g, 1, q);
    const SMat lhs = sg * av;
    const SMat rhs = au * g;
    const SMat lhs_abs = absify(sg) * absify(av);
    const SMat rhs_abs = absify(au) * absify(g);
    Real worst = 0;
    for (size_t k = 0; k < lhs.data().size(); ++k) {
        const LaurentSeries& le = lhs.data()[k];
        const LaurentSeries& re = rhs.data()[k];
        const int lo = std::max(le.lo(), re.lo());
        const int hi = std::min(le.hi(), re.hi());
        for (int n = lo; n <= hi; ++n) {
            const Real den = std::max({Real(1), lhs_abs.data()[k].at(n).real(),
                                       rhs_abs.data()[k].at(n).real()});
            worst = std::max(worst, std::abs(le.at(n) - re.at(n)) / den);
        }
    }
    return worst;
}

long long free_coefficient_count(const BlockModule& v) {
    long long n = 0;
    for (const auto& [ij, u] : v.U) {
        for (const auto& e : u.data())
            if (!e.empty()) n += e.hi() - e.lo() + 1;
    }
    return n;
}

} // namespace qstokes
