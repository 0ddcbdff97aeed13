#include "sdc/polymatrix.hpp"

namespace sdc {

PolyMatrix PolyMatrix::identity(int n, int nvars) {
    PolyMatrix p(n, n, nvars);
    for (int i = 0; i < n; ++i) p(i, i) = MultiPoly::constant(nvars, 1.0);
    return p;
}

PolyMatrix PolyMatrix::operator*(const PolyMatrix& o) const {
    if (cols_ != o.rows_ || nvars_ != o.nvars_) throw DimensionError("PolyMatrix product");
    PolyMatrix r(rows_, o.cols_, nvars_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < o.cols_; ++j) {
            MultiPoly s(nvars_);
            for (int k = 0; k < cols_; ++k) {
                const MultiPoly& x = (*this)(i, k);
                const MultiPoly& y = o(k, j);
                if (x.is_zero() || y.is_zero()) continue;
                s = s + x * y;
            }
            r(i, j) = std::move(s);
        }
    return r;
}

PolyMatrix PolyMatrix::operator+(const PolyMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("PolyMatrix add");
    PolyMatrix r(rows_, cols_, nvars_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
    return r;
}

PolyMatrix PolyMatrix::operator-(const PolyMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("PolyMatrix sub");
    PolyMatrix r(rows_, cols_, nvars_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
    return r;
}

PolyMatrix PolyMatrix::scaled(const MultiPoly& s) const {
    PolyMatrix r(rows_, cols_, nvars_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * s;
    return r;
}

PolyMatrix PolyMatrix::adjoint() const {
    PolyMatrix r(cols_, rows_, nvars_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j).conj_coeffs();
    return r;
}

bool PolyMatrix::is_hermitian(double coeff_tol) const {
    if (rows_ != cols_) return false;
    for (int i = 0; i < rows_; ++i)
        for (int j = i; j < cols_; ++j)
            if (!((*this)(i, j) - (*this)(j, i).conj_coeffs()).is_zero(coeff_tol)) return false;
    return true;
}

bool PolyMatrix::is_zero(double coeff_tol) const {
    for (const auto& p : a_)
        if (!p.is_zero(coeff_tol)) return false;
    return true;
}

bool PolyMatrix::is_diagonal(double coeff_tol) const {
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if (i != j && !(*this)(i, j).is_zero(coeff_tol)) return false;
    return true;
}

double PolyMatrix::max_abs_coeff() const {
    double m = 0;
    for (const auto& p : a_) m = std::max(m, p.max_abs_coeff());
    return m;
}

Matrix PolyMatrix::eval(std::span<const double> point) const {
    Matrix r(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j).eval(point);
    return r;
}

PolyMatrix pencil_from_family(const MatrixFamily& f) {
    const int n = f.n(), m = f.m();
    PolyMatrix p(n, n, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::vector<std::pair<std::vector<std::uint16_t>, cplx>> terms;
            for (int k = 0; k < m; ++k) {
                const cplx c = f[k](i, j);
                if (c == cplx(0.0, 0.0)) continue;
                std::vector<std::uint16_t> e(m, 0);
                e[k] = 1;
                terms.emplace_back(std::move(e), c);
            }
            p(i, j) = MultiPoly::from_terms(m, terms);
        }
    return p;
}

Matrix eval_pencil(const PolyMatrix& pm, std::span<const double> point) {
    if (static_cast<int>(point.size()) != pm.nvars()) throw DimensionError("eval_pencil point");
    return pm.eval(point);
}

}  // namespace sdc
