#pragma once

#include <vector>

#include "sdc/hermitian.hpp"

namespace sdc {

struct SvdResult {
    Matrix u;                   // rows x cols, columns normalized where sigma > 0
    std::vector<double> sigma;  // length cols, sorted descending
    Matrix v;                   // cols x cols unitary
};

/// Singular value decomposition A = U diag(sigma) V* by one-sided Jacobi on
/// the columns of A.  Small singular values come out with high relative
/// accuracy, which is what the rank and kernel decisions below rely on.
/// For strongly rectangular inputs (rows >= 8 cols) the columns of V are
/// seeded from an eigendecomposition of A*A and then polished; the sigmas are
/// always re-measured directly as ||A v_j||.
SvdResult svd(const Matrix& a, const Tolerances& tol = {});

struct RankResult {
    int rank = 0;
    Matrix null_basis;          // orthonormal right-kernel basis (cols = nullity)
    std::vector<double> sigma;  // all singular values, descending
    Matrix v;                   // full right singular basis
};

/// Numerical rank with cutoff sigma_i > rank_tol * max(rows, cols) * sigma_max,
/// plus an orthonormal basis of the right kernel at that cutoff.
RankResult svd_rank(const Matrix& a, const Tolerances& tol = {});

/// Spectral norm (largest singular value).
double spectral_norm(const Matrix& a, const Tolerances& tol = {});

struct KernelResult {
    int q = 0;      // dimension of the joint kernel
    Matrix basis;   // n x q orthonormal
    Matrix range;   // n x (n - q) orthonormal complement
    int stacked_rank = 0;
};

/// Joint kernel of the family, computed as the right kernel of the stacked
/// (m n) x n matrix [C_1; ...; C_m].
KernelResult common_kernel(const MatrixFamily& f, const Tolerances& tol = {});

struct DeflationResult {
    Matrix p;              // unitary, first q columns span the joint kernel
    MatrixFamily reduced;  // trailing (n-q) x (n-q) blocks
    int q = 0;
};

/// Split off the joint kernel as an exact zero block: P* C_i P = diag(0_q, C_i_hat).
/// Requires q > 0 (NoKernelError otherwise).  The q x q block and its border are
/// verified to be below rank_tol * ||C_i||_F before being zeroed exactly.
DeflationResult deflate_common_kernel(const MatrixFamily& f, const Tolerances& tol = {});

}  // namespace sdc
