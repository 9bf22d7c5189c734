#include "qstokes/matrix.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <random>
#include <climits>

namespace qstokes {

namespace {

using EMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;

EMat to_eigen(const CMat& a) {
    EMat m(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    return m;
}

CMat from_eigen(const EMat& m) {
    CMat a(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) a(i, j) = m(i, j);
    return a;
}

// Common extraction window of a series matrix: below min-lo every entry is an
// exact zero, above min-hi some entry is untracked.
void common_window(const SMat& a, int& lo, int& hi) {
    lo = INT_MAX;
    hi = INT_MAX;
    for (const auto& e : a.data()) {
        if (e.empty()) throw EmptyWindow("series matrix entry has empty window");
        lo = std::min(lo, e.lo());
        hi = std::min(hi, e.hi());
    }
}

} // namespace

CMat operator+(const CMat& a, const CMat& b) {
    assert(a.rows() == b.rows() && a.cols() == b.cols());
    CMat r = a;
    for (size_t k = 0; k < r.data().size(); ++k) r.data()[k] += b.data()[k];
    return r;
}

CMat operator-(const CMat& a, const CMat& b) {
    assert(a.rows() == b.rows() && a.cols() == b.cols());
    CMat r = a;
    for (size_t k = 0; k < r.data().size(); ++k) r.data()[k] -= b.data()[k];
    return r;
}

CMat operator*(const CMat& a, const CMat& b) {
    assert(a.cols() == b.rows());
    CMat r(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) {
            Complex s(0);
            for (int k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
            r(i, j) = s;
        }
    return r;
}

CMat operator*(const Complex& s, const CMat& a) {
    CMat r = a;
    for (auto& z : r.data()) z *= s;
    return r;
}

CMat transpose(const CMat& a) {
    CMat r(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) r(j, i) = a(i, j);
    return r;
}

Real max_abs(const CMat& a) {
    Real m = 0;
    for (const auto& z : a.data()) m = std::max(m, std::abs(z));
    return m;
}

CMat inverse(const CMat& a) {
    assert(a.rows() == a.cols());
    Eigen::FullPivLU<EMat> lu(to_eigen(a));
    if (!lu.isInvertible()) throw LinearSolveSingular("inverse(): singular matrix");
    return from_eigen(lu.inverse());
}

CMat solve(const CMat& a, const CMat& rhs) {
    assert(a.rows() == a.cols() && a.rows() == rhs.rows());
    const EMat ea = to_eigen(a);
    const EMat eb = to_eigen(rhs);
    Eigen::PartialPivLU<EMat> lu(ea);
    const EMat x = lu.solve(eb);
    const Real resid = (ea * x - eb).cwiseAbs().maxCoeff();
    const Real scale = std::max({Real(1), eb.cwiseAbs().maxCoeff(), x.cwiseAbs().maxCoeff()});
    if (!std::isfinite(resid) || resid > Real(1e-6) * scale)
        throw LinearSolveSingular("solve(): system is singular or severely ill-conditioned");
    return from_eigen(x);
}

std::vector<Complex> eigenvalues(const CMat& a) {
    assert(a.rows() == a.cols());
    Eigen::ComplexEigenSolver<EMat> es(to_eigen(a), /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw EigDecompositionFailed("eigenvalues(): solver did not converge");
    std::vector<Complex> ev(static_cast<size_t>(a.rows()));
    for (int i = 0; i < a.rows(); ++i) ev[static_cast<size_t>(i)] = es.eigenvalues()(i);
    return ev;
}

Real condition_number(const CMat& a) {
    Eigen::JacobiSVD<EMat> svd(to_eigen(a));
    const auto& s = svd.singularValues();
    if (s(s.size() - 1) == Real(0)) return std::numeric_limits<Real>::infinity();
    return s(0) / s(s.size() - 1);
}

int numeric_rank(const CMat& a, Real rel_threshold) {
    Eigen::JacobiSVD<EMat> svd(to_eigen(a));
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == Real(0)) return 0;
    int r = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) > rel_threshold * s(0)) ++r;
    return r;
}

CMat random_invertible(int n, unsigned seed, Real radius_lo, Real radius_hi) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> mag(static_cast<double>(radius_lo),
                                               static_cast<double>(radius_hi));
    std::uniform_real_distribution<double> arg(0.0, 6.283185307179586);
    for (int attempt = 0; attempt < 64; ++attempt) {
        CMat a(n, n);
        for (auto& z : a.data()) {
            const Real r = static_cast<Real>(mag(rng));
            const Real t = static_cast<Real>(arg(rng));
            z = Complex(r * std::cos(t), r * std::sin(t));
        }
        if (condition_number(a) < Real(1e6)) return a;
    }
    throw LinearSolveSingular("random_invertible(): could not draw a well-conditioned matrix");
}

CMat sylvester_matrix(const Complex& l, const CMat& b, const CMat& a) {
    const int r = a.rows(), s = b.rows();
    assert(a.cols() == r && b.cols() == s);
    CMat k(r * s, r * s);
    // vec is column-major: entry X(i,j) sits at index j*r + i.
    for (int j = 0; j < s; ++j)
        for (int i = 0; i < r; ++i) {
            const int col = j * r + i;
            for (int jj = 0; jj < s; ++jj) k(jj * r + i, col) += l * b(j, jj);
            for (int ii = 0; ii < r; ++ii) k(j * r + ii, col) -= a(ii, i);
        }
    return k;
}

// --- series matrices -------------------------------------------------------

SMat smat_zero(int rows, int cols, int lo, int hi) {
    SMat m(rows, cols);
    for (auto& e : m.data()) e = LaurentSeries::zero(lo, hi);
    return m;
}

SMat smat_identity(int n, int lo, int hi) {
    SMat m = smat_zero(n, n, lo, hi);
    for (int i = 0; i < n; ++i) m(i, i) = LaurentSeries::monomial(Complex(1), 0, lo, hi);
    return m;
}

SMat from_constant(const CMat& a, int lo, int hi) {
    SMat m(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            m(i, j) = LaurentSeries::monomial(a(i, j), 0, lo, hi);
    return m;
}

namespace {

// Entry windows inside one matrix may differ; lo is a hard valuation bound,
// so padding every entry down to the matrix-wide minimum is always sound and
// keeps binary operations from discarding tracked pole coefficients.
SMat harmonized_lo(const SMat& a) {
    int lo = INT_MAX;
    for (const auto& e : a.data()) {
        if (e.empty()) throw EmptyWindow("series matrix entry has empty window");
        lo = std::min(lo, e.lo());
    }
    SMat r = a;
    for (auto& e : r.data()) e = e.extended(lo, e.hi());
    return r;
}

} // namespace

SMat operator+(const SMat& a0, const SMat& b0) {
    assert(a0.rows() == b0.rows() && a0.cols() == b0.cols());
    const SMat a = harmonized_lo(a0), b = harmonized_lo(b0);
    SMat r(a.rows(), a.cols());
    for (size_t k = 0; k < r.data().size(); ++k) r.data()[k] = a.data()[k] + b.data()[k];
    return r;
}

SMat operator-(const SMat& a0, const SMat& b0) {
    assert(a0.rows() == b0.rows() && a0.cols() == b0.cols());
    const SMat a = harmonized_lo(a0), b = harmonized_lo(b0);
    SMat r(a.rows(), a.cols());
    for (size_t k = 0; k < r.data().size(); ++k) r.data()[k] = sub(a.data()[k], b.data()[k]);
    return r;
}

SMat operator*(const SMat& a0, const SMat& b0) {
    assert(a0.cols() == b0.rows());
    const SMat a = harmonized_lo(a0), b = harmonized_lo(b0);
    SMat r(a.rows(), b0.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) {
            LaurentSeries s = mul(a(i, 0), b(0, j));
            for (int k = 1; k < a.cols(); ++k) s = s + mul(a(i, k), b(k, j));
            r(i, j) = s;
        }
    return r;
}

SMat mul(const CMat& a, const SMat& b) {
    assert(a.cols() == b.rows());
    SMat r(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) {
            LaurentSeries s = scale(b(0, j), a(i, 0));
            for (int k = 1; k < a.cols(); ++k) s = s + scale(b(k, j), a(i, k));
            r(i, j) = s;
        }
    return r;
}

SMat mul(const SMat& a, const CMat& b) {
    assert(a.cols() == b.rows());
    SMat r(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) {
            LaurentSeries s = scale(a(i, 0), b(0, j));
            for (int k = 1; k < a.cols(); ++k) s = s + scale(a(i, k), b(k, j));
            r(i, j) = s;
        }
    return r;
}

SMat scale(const SMat& a, const Complex& s) {
    SMat r = a;
    for (auto& e : r.data()) e = scale(e, s);
    return r;
}

SMat shifted(const SMat& a, int k) {
    SMat r = a;
    for (auto& e : r.data()) e = e.shifted(k);
    return r;
}

SMat sigma_q(const SMat& a, int k, const Complex& q) {
    SMat r = a;
    for (auto& e : r.data()) e = sigma_q(e, k, q);
    return r;
}

SMat restricted(const SMat& a, int lo, int hi) {
    SMat r = a;
    for (auto& e : r.data()) e = e.restricted(lo, hi);
    return r;
}

SMat extended(const SMat& a, int lo, int hi) {
    SMat r = a;
    for (auto& e : r.data()) e = e.extended(lo, hi);
    return r;
}

SMat mul_onto(const SMat& a, const SMat& b, int lo, int hi) {
    assert(a.cols() == b.rows());
    SMat r(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) {
            LaurentSeries s = LaurentSeries::zero(lo, hi);
            for (int k = 0; k < a.cols(); ++k)
                s = add(s, mul_onto(a(i, k), b(k, j), lo, hi));
            r(i, j) = s;
        }
    return r;
}

CMat eval(const SMat& a, const Complex& z) {
    CMat r(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) r(i, j) = eval(a(i, j), z);
    return r;
}

CMat coeff(const SMat& a, int n) {
    CMat r(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) r(i, j) = a(i, j).coeff(n);
    return r;
}

Real max_abs(const SMat& a) {
    Real m = 0;
    for (const auto& e : a.data()) m = std::max(m, e.max_abs());
    return m;
}

Real max_abs_diff(const SMat& a, const SMat& b) {
    assert(a.rows() == b.rows() && a.cols() == b.cols());
    Real m = 0;
    for (size_t k = 0; k < a.data().size(); ++k)
        m = std::max(m, max_abs_diff(a.data()[k], b.data()[k]));
    return m;
}

SMat invert(const SMat& f) {
    assert(f.rows() == f.cols());
    const int n = f.rows();
    int lo, hi;
    common_window(f, lo, hi);
    if (hi < lo) throw EmptyWindow("invert(): empty common window");

    const Real scale_mag = max_abs(f);
    if (scale_mag == Real(0)) throw NonInvertible("invert(): zero matrix");

    // Valuation of the matrix: the least order with a non-negligible
    // coefficient matrix; its coefficient must be invertible.
    int v = lo;
    bool found = false;
    for (int k = lo; k <= hi; ++k) {
        if (max_abs(coeff(f, k)) > kValuationEpsilon * scale_mag) {
            v = k;
            found = true;
            break;
        }
    }
    if (!found) throw NonInvertible("invert(): all coefficients below threshold");

    CMat lead = coeff(f, v);
    CMat lead_inv;
    try {
        lead_inv = inverse(lead);
    } catch (const LinearSolveSingular&) {
        throw NonInvertible("invert(): leading coefficient matrix is singular");
    }

    const int m = hi - v;
    std::vector<CMat> x(static_cast<size_t>(m + 1));
    x[0] = lead_inv;
    for (int j = 1; j <= m; ++j) {
        CMat acc(n, n);
        for (int k = 1; k <= j; ++k) acc = acc + coeff(f, v + k) * x[static_cast<size_t>(j - k)];
        x[static_cast<size_t>(j)] = Complex(-1) * (lead_inv * acc);
    }

    SMat r = smat_zero(n, n, -v, hi - 2 * v);
    for (int j = 0; j <= m; ++j)
        for (int i = 0; i < n; ++i)
            for (int jj = 0; jj < n; ++jj) r(i, jj).at(-v + j) = x[static_cast<size_t>(j)](i, jj);
    return r;
}

} // namespace qstokes
