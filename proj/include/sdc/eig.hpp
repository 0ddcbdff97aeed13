#pragma once

#include <vector>

#include "sdc/hermitian.hpp"

namespace sdc {

struct EigResult {
    Matrix u;                 // unitary, columns are eigenvectors
    std::vector<double> lam;  // eigenvalues sorted descending
    int sweeps = 0;
};

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi.
/// Guarantees ||U*U - I||_F <= 1e-12 n and ||A - U diag(lam) U*||_F <= 1e-12 ||A||_F n.
/// Column phases are fixed (largest-modulus entry real positive); real input
/// yields a real U with exactly zero imaginary parts.
EigResult hermitian_eig(const HermitianMatrix& a, const Tolerances& tol = {});

/// Same, for a matrix that is Hermitian by construction.
EigResult hermitian_eig_mat(const Matrix& a, const Tolerances& tol = {});

/// Spectral positive definite square root: Q Hermitian PD with Q Q = X.
/// Requires lambda_min(X) > pd_tol * lambda_max; throws NotPositiveDefiniteError.
HermitianMatrix pd_sqrt(const HermitianMatrix& x, const Tolerances& tol = {});

}  // namespace sdc
