#include "sdc/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sdc {

namespace {

double offdiag_norm(const Matrix& a) {
    double s = 0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (i != j) s += abs2(a(i, j));
    return std::sqrt(s);
}

}  // namespace

EigResult hermitian_eig_mat(const Matrix& a0, const Tolerances& tol) {
    const int n = a0.rows();
    if (n != a0.cols()) throw DimensionError("hermitian_eig expects a square matrix");
    const bool real_input = a0.is_real();
    Matrix a = a0;
    Matrix u = Matrix::identity(n);
    const double norm = a.frobenius_norm();
    EigResult res;
    if (norm > 0) {
        const double target = 1e-13 * norm;
        const double skip = 1e-18 * norm;
        const int max_sweeps = 64;
        int sweep = 0;
        for (; sweep < max_sweeps; ++sweep) {
            if (offdiag_norm(a) <= target) break;
            bool rotated = false;
            for (int p = 0; p < n - 1; ++p) {
                for (int q = p + 1; q < n; ++q) {
                    const cplx b = a(p, q);
                    const double babs = std::abs(b);
                    if (babs <= skip) continue;
                    rotated = true;
                    const double ap = a(p, p).real();
                    const double aq = a(q, q).real();
                    const double tau = (ap - aq) / (2.0 * babs);
                    const double t = tau >= 0 ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                              : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                    const double c = 1.0 / std::sqrt(1.0 + t * t);
                    const double sig = t * c;
                    const cplx phase = b / babs;
                    const cplx s = sig * std::conj(phase);
                    const cplx sbar = std::conj(s);
                    // columns p,q: col_p' = c col_p + s col_q ; col_q' = -conj(s) col_p + c col_q
                    for (int i = 0; i < n; ++i) {
                        const cplx xp = a(i, p), xq = a(i, q);
                        a(i, p) = c * xp + s * xq;
                        a(i, q) = -sbar * xp + c * xq;
                        const cplx up = u(i, p), uq = u(i, q);
                        u(i, p) = c * up + s * uq;
                        u(i, q) = -sbar * up + c * uq;
                    }
                    // rows p,q with the adjoint rotation
                    for (int j = 0; j < n; ++j) {
                        const cplx xp = a(p, j), xq = a(q, j);
                        a(p, j) = c * xp + sbar * xq;
                        a(q, j) = -s * xp + c * xq;
                    }
                    // exact updates where roundoff matters most
                    a(p, p) = cplx(ap + t * babs, 0.0);
                    a(q, q) = cplx(aq - t * babs, 0.0);
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                }
            }
            if (!rotated) break;
        }
        const double off = offdiag_norm(a);
        if (off > 1e-12 * norm * n)
            throw ConvergenceError("hermitian_eig exceeded " + std::to_string(max_sweeps) +
                                   " sweeps (offdiag " + std::to_string(off) + ")");
        res.sweeps = sweep;
    }
    res.lam.resize(n);
    for (int i = 0; i < n; ++i) res.lam[i] = a(i, i).real();
    // sort descending, permute columns of U accordingly
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return res.lam[i] > res.lam[j]; });
    Matrix up(n, n);
    std::vector<double> lam(n);
    for (int j = 0; j < n; ++j) {
        lam[j] = res.lam[order[j]];
        for (int i = 0; i < n; ++i) up(i, j) = u(i, order[j]);
    }
    res.lam = std::move(lam);
    // column phase fix: largest-modulus entry real positive
    for (int j = 0; j < n; ++j) {
        int imax = 0;
        double best = 0;
        for (int i = 0; i < n; ++i) {
            const double v = std::abs(up(i, j));
            if (v > best) { best = v; imax = i; }
        }
        if (best > 0) {
            const cplx ph = std::abs(up(imax, j)) / up(imax, j);
            for (int i = 0; i < n; ++i) up(i, j) *= ph;
            up(imax, j) = cplx(std::abs(up(imax, j)), 0.0);
        }
    }
    if (real_input) up.clear_imag();
    res.u = std::move(up);
    (void)tol;
    return res;
}

EigResult hermitian_eig(const HermitianMatrix& a, const Tolerances& tol) {
    return hermitian_eig_mat(a.mat(), tol);
}

HermitianMatrix pd_sqrt(const HermitianMatrix& x, const Tolerances& tol) {
    EigResult e = hermitian_eig(x, tol);
    const int n = x.dim();
    const double lmax = n > 0 ? e.lam.front() : 0.0;
    const double lmin = n > 0 ? e.lam.back() : 0.0;
    if (lmin <= 0 || lmin <= tol.pd_tol * lmax) throw NotPositiveDefiniteError(lmin);
    Matrix q(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cplx s = 0;
            for (int k = 0; k < n; ++k)
                s += e.u(i, k) * std::sqrt(e.lam[k]) * std::conj(e.u(j, k));
            q(i, j) = s;
        }
    HermitianMatrix r = HermitianMatrix::wrap(q);
    return r;
}

}  // namespace sdc
