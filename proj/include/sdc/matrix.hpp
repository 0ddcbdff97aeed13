#pragma once

#include <vector>

#include "sdc/types.hpp"

namespace sdc {

/// Dense complex matrix with value semantics, row-major storage.
class Matrix {
  public:
    Matrix() = default;
    Matrix(int rows, int cols, cplx fill = cplx(0.0, 0.0))
        : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, fill) {}

    static Matrix identity(int n);
    static Matrix diagonal(const std::vector<double>& d);
    static Matrix diagonal(const std::vector<cplx>& d);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    cplx& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    cplx operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    Matrix& operator+=(const Matrix& o);
    Matrix& operator-=(const Matrix& o);
    Matrix& operator*=(cplx s);
    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, cplx s) { return a *= s; }
    friend Matrix operator*(cplx s, Matrix a) { return a *= s; }
    Matrix operator*(const Matrix& o) const;

    /// Conjugate transpose.
    Matrix adjoint() const;
    Matrix transpose() const;

    double frobenius_norm() const;
    double max_abs() const;
    cplx trace() const;
    bool all_finite() const;
    /// True when every imaginary part is exactly zero.
    bool is_real() const;
    /// Force all imaginary parts to exactly +0.0 (realness canonicalization).
    void clear_imag();
    double max_imag_abs() const;

    std::vector<cplx> col(int j) const;
    void set_col(int j, const std::vector<cplx>& v);

    /// Principal submatrix rows [r0, r1) x cols [c0, c1).
    Matrix block(int r0, int r1, int c0, int c1) const;

  private:
    int rows_ = 0, cols_ = 0;
    std::vector<cplx> a_;
};

Matrix operator*(const Matrix& a, double s);

/// Frobenius inner product <A, B> = sum conj(A_ij) B_ij.
cplx frobenius_inner(const Matrix& a, const Matrix& b);

/// x = A^{-1} b via LU with partial pivoting.  Throws Error when singular to
/// working precision.
std::vector<cplx> lu_solve(const Matrix& a, const std::vector<cplx>& b);
Matrix lu_solve(const Matrix& a, const Matrix& b);
Matrix inverse(const Matrix& a);
cplx determinant(const Matrix& a);

}  // namespace sdc
