#include "sdc/hermitian.hpp"

#include <algorithm>
#include <cmath>

#include "sdc/svd.hpp"

namespace sdc {

HermitianMatrix make_hermitian(const Matrix& raw, const Tolerances& tol) {
    if (raw.rows() != raw.cols()) throw DimensionError("make_hermitian expects a square matrix");
    if (!raw.all_finite()) throw NonFiniteError("make_hermitian");
    const int n = raw.rows();
    double dev = 0;
    Matrix sym(n, n);
    for (int i = 0; i < n; ++i) {
        sym(i, i) = cplx(raw(i, i).real(), 0.0);
        dev = std::max(dev, std::abs(raw(i, i).imag()));
        for (int j = i + 1; j < n; ++j) {
            const cplx a = raw(i, j), b = raw(j, i);
            dev = std::max(dev, std::abs(a - std::conj(b)));
            const cplx h = 0.5 * (a + std::conj(b));
            sym(i, j) = h;
            sym(j, i) = std::conj(h);
        }
    }
    if (dev > tol.herm_tol * std::max(raw.frobenius_norm(), 1e-300) && dev > 0)
        throw NotHermitianError(dev);
    if (sym.is_real()) sym.clear_imag();
    HermitianMatrix h;
    h.a_ = std::move(sym);
    h.asymmetry_ = dev;
    return h;
}

HermitianMatrix HermitianMatrix::wrap(const Matrix& nearly_hermitian) {
    const int n = nearly_hermitian.rows();
    Matrix sym(n, n);
    double dev = 0;
    for (int i = 0; i < n; ++i) {
        sym(i, i) = cplx(nearly_hermitian(i, i).real(), 0.0);
        dev = std::max(dev, std::abs(nearly_hermitian(i, i).imag()));
        for (int j = i + 1; j < n; ++j) {
            const cplx h = 0.5 * (nearly_hermitian(i, j) + std::conj(nearly_hermitian(j, i)));
            dev = std::max(dev, std::abs(nearly_hermitian(i, j) - std::conj(nearly_hermitian(j, i))));
            sym(i, j) = h;
            sym(j, i) = std::conj(h);
        }
    }
    if (sym.is_real()) sym.clear_imag();
    HermitianMatrix h;
    h.a_ = std::move(sym);
    h.asymmetry_ = dev;
    return h;
}

MatrixFamily::MatrixFamily(std::vector<HermitianMatrix> members) : members_(std::move(members)) {
    if (members_.empty()) throw DimensionError("MatrixFamily needs at least one member");
    const int n = members_[0].dim();
    for (const auto& c : members_) {
        if (c.dim() != n) throw DimensionError("MatrixFamily members must share a dimension");
        if (!c.is_real()) real_ = false;
    }
}

double off2(const std::vector<Matrix>& mats) {
    double s = 0;
    for (const auto& c : mats)
        for (int i = 0; i < c.rows(); ++i)
            for (int j = 0; j < c.cols(); ++j)
                if (i != j) s += abs2(c(i, j));
    return s;
}

double off2(const MatrixFamily& f) {
    double s = 0;
    for (const auto& c : f.members())
        for (int i = 0; i < c.dim(); ++i)
            for (int j = 0; j < c.dim(); ++j)
                if (i != j) s += abs2(c(i, j));
    return s;
}

double commutation_residual(const MatrixFamily& f) {
    double worst = 0;
    for (int i = 0; i < f.m(); ++i) {
        for (int j = i + 1; j < f.m(); ++j) {
            const Matrix& a = f[i].mat();
            const Matrix& b = f[j].mat();
            const double den = a.frobenius_norm() * b.frobenius_norm();
            if (den == 0) continue;
            worst = std::max(worst, (a * b - b * a).frobenius_norm() / den);
        }
    }
    return worst;
}

bool is_commuting(const MatrixFamily& f, const Tolerances& tol) {
    return commutation_residual(f) <= tol.commute_tol;
}

double backward_error(const MatrixFamily& f, const Matrix& u) {
    if (u.rows() != f.n()) throw DimensionError("backward_error transform");
    double worst = 0;
    for (const auto& c : f.members()) {
        Matrix t = u.adjoint() * c.mat() * u;
        const double den = spectral_norm(t);
        for (int i = 0; i < t.rows(); ++i) t(i, i) = 0.0;
        if (den == 0) continue;
        worst = std::max(worst, spectral_norm(t) / den);
    }
    return worst;
}

HermitianMatrix congruence(const HermitianMatrix& c, const Matrix& u) {
    Matrix t = u.adjoint() * c.mat() * u;
    if (c.is_real() && u.is_real()) t.clear_imag();
    return HermitianMatrix::wrap(t);
}

Matrix stack_family(const MatrixFamily& f) {
    const int n = f.n(), m = f.m();
    Matrix s(m * n, n);
    for (int k = 0; k < m; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) s(k * n + i, j) = f[k](i, j);
    return s;
}

}  // namespace sdc
