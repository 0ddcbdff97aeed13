#include "sdc/matrix.hpp"

#include <algorithm>
#include <cmath>

namespace sdc {

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(const std::vector<double>& d) {
    Matrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return m;
}

Matrix Matrix::diagonal(const std::vector<cplx>& d) {
    Matrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return m;
}

Matrix& Matrix::operator+=(const Matrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix add");
    for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix sub");
    for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
}

Matrix& Matrix::operator*=(cplx s) {
    for (auto& z : a_) z *= s;
    return *this;
}

Matrix Matrix::operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw DimensionError("matrix product");
    Matrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int k = 0; k < cols_; ++k) {
            const cplx aik = (*this)(i, k);
            if (aik == cplx(0.0, 0.0)) continue;
            for (int j = 0; j < o.cols_; ++j) r(i, j) += aik * o(k, j);
        }
    }
    return r;
}

Matrix Matrix::adjoint() const {
    Matrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
}

Matrix Matrix::transpose() const {
    Matrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

double Matrix::frobenius_norm() const {
    double s = 0;
    for (const auto& z : a_) s += abs2(z);
    return std::sqrt(s);
}

double Matrix::max_abs() const {
    double s = 0;
    for (const auto& z : a_) s = std::max(s, std::abs(z));
    return s;
}

cplx Matrix::trace() const {
    cplx t = 0;
    for (int i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
}

bool Matrix::all_finite() const {
    for (const auto& z : a_)
        if (!is_finite(z)) return false;
    return true;
}

bool Matrix::is_real() const {
    for (const auto& z : a_)
        if (z.imag() != 0.0) return false;
    return true;
}

void Matrix::clear_imag() {
    for (auto& z : a_) z = cplx(z.real(), 0.0);
}

double Matrix::max_imag_abs() const {
    double s = 0;
    for (const auto& z : a_) s = std::max(s, std::abs(z.imag()));
    return s;
}

std::vector<cplx> Matrix::col(int j) const {
    std::vector<cplx> v(rows_);
    for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
}

void Matrix::set_col(int j, const std::vector<cplx>& v) {
    for (int i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

Matrix Matrix::block(int r0, int r1, int c0, int c1) const {
    Matrix r(r1 - r0, c1 - c0);
    for (int i = r0; i < r1; ++i)
        for (int j = c0; j < c1; ++j) r(i - r0, j - c0) = (*this)(i, j);
    return r;
}

Matrix operator*(const Matrix& a, double s) { return a * cplx(s, 0.0); }

cplx frobenius_inner(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("frobenius_inner");
    cplx s = 0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) s += std::conj(a(i, j)) * b(i, j);
    return s;
}

namespace {

// LU with partial pivoting; returns factors in place plus the pivot row list.
// Throws when a pivot underflows relative to the matrix scale.
struct Lu {
    Matrix lu;
    std::vector<int> piv;
    int sign = 1;
};

Lu lu_factor(const Matrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("lu_factor needs a square matrix");
    const int n = a.rows();
    Lu f{a, std::vector<int>(n), 1};
    for (int i = 0; i < n; ++i) f.piv[i] = i;
    const double scale = std::max(a.max_abs(), 1e-300);
    for (int k = 0; k < n; ++k) {
        int p = k;
        double best = std::abs(f.lu(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double v = std::abs(f.lu(i, k));
            if (v > best) { best = v; p = i; }
        }
        if (best <= 1e-14 * scale) throw Error("lu_factor: matrix is singular to working precision");
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(f.lu(p, j), f.lu(k, j));
            std::swap(f.piv[p], f.piv[k]);
            f.sign = -f.sign;
        }
        const cplx pivot = f.lu(k, k);
        for (int i = k + 1; i < n; ++i) {
            const cplx m = f.lu(i, k) / pivot;
            f.lu(i, k) = m;
            if (m == cplx(0.0, 0.0)) continue;
            for (int j = k + 1; j < n; ++j) f.lu(i, j) -= m * f.lu(k, j);
        }
    }
    return f;
}

std::vector<cplx> lu_apply(const Lu& f, const std::vector<cplx>& b) {
    const int n = f.lu.rows();
    std::vector<cplx> x(n);
    for (int i = 0; i < n; ++i) x[i] = b[f.piv[i]];
    for (int i = 1; i < n; ++i)
        for (int j = 0; j < i; ++j) x[i] -= f.lu(i, j) * x[j];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[i] -= f.lu(i, j) * x[j];
        x[i] /= f.lu(i, i);
    }
    return x;
}

}  // namespace

std::vector<cplx> lu_solve(const Matrix& a, const std::vector<cplx>& b) {
    if (static_cast<int>(b.size()) != a.rows()) throw DimensionError("lu_solve rhs");
    return lu_apply(lu_factor(a), b);
}

Matrix lu_solve(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) throw DimensionError("lu_solve rhs");
    const Lu f = lu_factor(a);
    Matrix x(a.cols(), b.cols());
    for (int j = 0; j < b.cols(); ++j) x.set_col(j, lu_apply(f, b.col(j)));
    return x;
}

Matrix inverse(const Matrix& a) { return lu_solve(a, Matrix::identity(a.rows())); }

cplx determinant(const Matrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("determinant");
    if (a.rows() == 0) return 1.0;
    Lu f;
    try {
        f = lu_factor(a);
    } catch (const Error&) {
        return 0.0;  // singular to working precision
    }
    cplx d = static_cast<double>(f.sign);
    for (int i = 0; i < a.rows(); ++i) d *= f.lu(i, i);
    return d;
}

}  // namespace sdc
