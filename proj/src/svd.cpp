#include "sdc/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sdc/eig.hpp"

namespace sdc {

namespace {

// One-sided Jacobi: orthogonalize the columns of b, accumulating the applied
// rotations into v (which the caller may preseed with an approximate basis).
// Works on the transpose so the column sweeps run over contiguous memory.
void orthogonalize_columns(Matrix& b, Matrix& v, int max_sweeps) {
    const int m = b.rows(), n = b.cols();
    // safely above the inner-product noise floor (~sqrt(m) eps relative)
    const double eps = 2.220446049250313e-16;
    const double conv = 64.0 * eps;
    Matrix bt = b.transpose();  // row i of bt is column i of b
    bool done = false;
    for (int sweep = 0; sweep < max_sweeps && !done; ++sweep) {
        // columns that have collapsed to roundoff noise are exact kernel
        // directions; zero them so they stop churning against each other
        double maxn2 = 0;
        std::vector<double> n2(n, 0.0);
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < m; ++k) n2[j] += abs2(bt(j, k));
            maxn2 = std::max(maxn2, n2[j]);
        }
        const double drop2 = maxn2 * (std::sqrt(double(m)) * 16.0 * eps) *
                             (std::sqrt(double(m)) * 16.0 * eps);
        for (int j = 0; j < n; ++j)
            if (n2[j] > 0 && n2[j] <= drop2) {
                for (int k = 0; k < m; ++k) bt(j, k) = 0.0;
                n2[j] = 0.0;
            }
        bool converged = true;
        for (int i = 0; i < n - 1; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const double gii = n2[i], gjj = n2[j];
                cplx gij = 0;
                for (int k = 0; k < m; ++k) gij += std::conj(bt(i, k)) * bt(j, k);
                const double gabs = std::abs(gij);
                if (gabs <= conv * std::sqrt(gii * gjj) || gabs == 0.0) continue;
                converged = false;
                const double tau = (gii - gjj) / (2.0 * gabs);
                const double t = tau >= 0 ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                          : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const cplx s = (t * c) * std::conj(gij / gabs);
                const cplx sbar = std::conj(s);
                double ni = 0, nj = 0;
                for (int k = 0; k < m; ++k) {
                    const cplx xi = bt(i, k), xj = bt(j, k);
                    const cplx yi = c * xi + s * xj;
                    const cplx yj = -sbar * xi + c * xj;
                    bt(i, k) = yi;
                    bt(j, k) = yj;
                    ni += abs2(yi);
                    nj += abs2(yj);
                }
                n2[i] = ni;
                n2[j] = nj;
                for (int k = 0; k < n; ++k) {
                    const cplx xi = v(k, i), xj = v(k, j);
                    v(k, i) = c * xi + s * xj;
                    v(k, j) = -sbar * xi + c * xj;
                }
            }
        }
        done = converged;
    }
    b = bt.transpose();
    if (!done) throw ConvergenceError("one-sided Jacobi SVD did not converge");
}

}  // namespace

SvdResult svd(const Matrix& a, const Tolerances& tol) {
    if (!a.all_finite()) throw NonFiniteError("svd input");
    const int m = a.rows(), n = a.cols();
    const bool real_input = a.is_real();
    Matrix b = a;
    Matrix v = Matrix::identity(n);
    if (m >= 8 * n && m > 64) {
        // Tall input: seed V from the Gram spectrum, then polish.  Sigmas are
        // re-measured directly from the orthogonalized columns below, so the
        // sqrt(eps) accuracy loss of the Gram route does not survive.
        const Matrix at = a.transpose();
        Matrix g(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                cplx s = 0;
                for (int k = 0; k < m; ++k) s += std::conj(at(i, k)) * at(j, k);
                g(i, j) = s;
                g(j, i) = std::conj(s);
            }
        EigResult ge = hermitian_eig_mat(g, tol);
        v = ge.u;
        b = a * v;
    }
    orthogonalize_columns(b, v, 60);

    SvdResult r;
    r.sigma.resize(n);
    for (int j = 0; j < n; ++j) {
        double s2 = 0;
        for (int k = 0; k < m; ++k) s2 += abs2(b(k, j));
        r.sigma[j] = std::sqrt(s2);
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return r.sigma[i] > r.sigma[j]; });
    Matrix u(m, n), vs(n, n);
    std::vector<double> sig(n);
    for (int j = 0; j < n; ++j) {
        const int src = order[j];
        sig[j] = r.sigma[src];
        for (int k = 0; k < n; ++k) vs(k, j) = v(k, src);
        if (sig[j] > 0)
            for (int k = 0; k < m; ++k) u(k, j) = b(k, src) / sig[j];
    }
    r.sigma = std::move(sig);
    if (real_input) {
        u.clear_imag();
        vs.clear_imag();
    }
    r.u = std::move(u);
    r.v = std::move(vs);
    return r;
}

RankResult svd_rank(const Matrix& a, const Tolerances& tol) {
    SvdResult s = svd(a, tol);
    const int n = a.cols();
    RankResult r;
    const double smax = n > 0 ? s.sigma[0] : 0.0;
    const double cutoff = tol.rank_cutoff(a.rows(), a.cols()) * smax;
    int rank = 0;
    while (rank < n && s.sigma[rank] > cutoff) ++rank;
    r.rank = rank;
    r.null_basis = s.v.block(0, n, rank, n);
    r.sigma = std::move(s.sigma);
    r.v = std::move(s.v);
    return r;
}

double spectral_norm(const Matrix& a, const Tolerances& tol) {
    if (a.empty()) return 0.0;
    return svd(a, tol).sigma[0];
}

KernelResult common_kernel(const MatrixFamily& f, const Tolerances& tol) {
    RankResult r = svd_rank(stack_family(f), tol);
    KernelResult k;
    k.stacked_rank = r.rank;
    k.q = f.n() - r.rank;
    k.basis = r.null_basis;
    k.range = r.v.block(0, f.n(), 0, r.rank);
    return k;
}

DeflationResult deflate_common_kernel(const MatrixFamily& f, const Tolerances& tol) {
    KernelResult k = common_kernel(f, tol);
    if (k.q == 0) throw NoKernelError();
    const int n = f.n(), q = k.q;
    Matrix p(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < q; ++j) p(i, j) = k.basis(i, j);
        for (int j = q; j < n; ++j) p(i, j) = k.range(i, j - q);
    }
    double maxnorm = 0;
    for (const auto& c : f.members()) maxnorm = std::max(maxnorm, c.frobenius_norm());
    const double thr = tol.rank_cutoff(f.m() * n, n) * maxnorm;

    std::vector<HermitianMatrix> reduced;
    reduced.reserve(f.m());
    for (const auto& c : f.members()) {
        Matrix t = p.adjoint() * c.mat() * p;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i < q || j < q) {
                    if (std::abs(t(i, j)) > thr)
                        throw Error("deflate_common_kernel: kernel block residue " +
                                    std::to_string(std::abs(t(i, j))) + " exceeds tolerance");
                    t(i, j) = 0.0;
                }
        reduced.push_back(HermitianMatrix::wrap(t.block(q, n, q, n)));
    }
    DeflationResult d;
    d.p = std::move(p);
    if (f.is_real()) d.p.clear_imag();
    d.reduced = MatrixFamily(std::move(reduced));
    d.q = q;
    return d;
}

}  // namespace sdc
