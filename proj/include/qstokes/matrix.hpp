#ifndef QSTOKES_MATRIX_HPP
#define QSTOKES_MATRIX_HPP

#include <cassert>
#include <vector>

#include "qstokes/laurent.hpp"
#include "qstokes/scalar.hpp"

namespace qstokes {

// Small dense matrix over an arbitrary coefficient ring (Complex for the
// constant parts, LaurentSeries for gauge data).  Dense linear algebra on
// Complex matrices is delegated to Eigen in linalg.cpp.
template <class T>
class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols) : r_(rows), c_(cols), v_(static_cast<size_t>(rows * cols)) {}
    Mat(int rows, int cols, std::vector<T> vals)
        : r_(rows), c_(cols), v_(std::move(vals)) {
        assert(static_cast<int>(v_.size()) == rows * cols);
    }

    int rows() const { return r_; }
    int cols() const { return c_; }

    T& operator()(int i, int j) {
        assert(i >= 0 && i < r_ && j >= 0 && j < c_);
        return v_[static_cast<size_t>(i) * c_ + j];
    }
    const T& operator()(int i, int j) const {
        assert(i >= 0 && i < r_ && j >= 0 && j < c_);
        return v_[static_cast<size_t>(i) * c_ + j];
    }

    std::vector<T>& data() { return v_; }
    const std::vector<T>& data() const { return v_; }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

private:
    int r_ = 0, c_ = 0;
    std::vector<T> v_;
};

using CMat = Mat<Complex>;
using SMat = Mat<LaurentSeries>;

CMat operator+(const CMat& a, const CMat& b);
CMat operator-(const CMat& a, const CMat& b);
CMat operator*(const CMat& a, const CMat& b);
CMat operator*(const Complex& s, const CMat& a);
CMat transpose(const CMat& a);
Real max_abs(const CMat& a);

// Dense routines (Eigen-backed).
CMat inverse(const CMat& a);
CMat solve(const CMat& a, const CMat& rhs);                // a x = rhs
std::vector<Complex> eigenvalues(const CMat& a);
Real condition_number(const CMat& a);
int numeric_rank(const CMat& a, Real rel_threshold);
CMat random_invertible(int n, unsigned seed, Real radius_lo = Real(0.5),
                       Real radius_hi = Real(2));

// Kronecker-product matrix of the Sylvester-type map X -> l*X*b - a*X (columns
// index vec(X) in column-major order).
CMat sylvester_matrix(const Complex& l, const CMat& b, const CMat& a);

// --- series matrices -------------------------------------------------------

SMat smat_zero(int rows, int cols, int lo, int hi);
SMat smat_identity(int n, int lo, int hi);
SMat from_constant(const CMat& a, int lo, int hi);

SMat operator+(const SMat& a, const SMat& b);
SMat operator-(const SMat& a, const SMat& b);
SMat operator*(const SMat& a, const SMat& b);
SMat mul(const CMat& a, const SMat& b);
SMat mul(const SMat& a, const CMat& b);
SMat scale(const SMat& a, const Complex& s);
SMat shifted(const SMat& a, int k);
SMat sigma_q(const SMat& a, int k, const Complex& q);
SMat restricted(const SMat& a, int lo, int hi);
SMat extended(const SMat& a, int lo, int hi);

// Matrix product onto an explicit target window (mul_onto per entry).
SMat mul_onto(const SMat& a, const SMat& b, int lo, int hi);

CMat eval(const SMat& a, const Complex& z);
CMat coeff(const SMat& a, int n);        // hard-valuation convention per entry
Real max_abs(const SMat& a);
Real max_abs_diff(const SMat& a, const SMat& b);

// Inverse of a matrix of series whose leading coefficient matrix (at the
// common valuation) is invertible.  Window bookkeeping as for scalar invert.
SMat invert(const SMat& f);

} // namespace qstokes

#endif
