#pragma once

#include <vector>

#include "sdc/matrix.hpp"

namespace sdc {

/// Dense Hermitian matrix.  Construction goes through make_hermitian, which
/// symmetrizes via (A + A*)/2, zeroes the diagonal imaginary parts exactly and
/// records the worst asymmetry of the raw input.
class HermitianMatrix {
  public:
    HermitianMatrix() = default;

    int dim() const { return a_.rows(); }
    const Matrix& mat() const { return a_; }
    cplx operator()(int i, int j) const { return a_(i, j); }
    double asymmetry() const { return asymmetry_; }
    bool is_real() const { return a_.is_real(); }
    double frobenius_norm() const { return a_.frobenius_norm(); }

    friend HermitianMatrix make_hermitian(const Matrix& raw, const Tolerances& tol);
    /// Wrap a matrix that is Hermitian by construction (exact symmetrization,
    /// no tolerance gate).  Internal plumbing for congruence outputs.
    static HermitianMatrix wrap(const Matrix& nearly_hermitian);

  private:
    Matrix a_;
    double asymmetry_ = 0.0;
};

/// make_hermitian: validate + symmetrize a raw square matrix.
/// Throws NonFiniteError, NotHermitianError (deviation > herm_tol * ||A||_F).
HermitianMatrix make_hermitian(const Matrix& raw, const Tolerances& tol = {});

/// Ordered family of same-size Hermitian matrices.
class MatrixFamily {
  public:
    MatrixFamily() = default;
    explicit MatrixFamily(std::vector<HermitianMatrix> members);

    int m() const { return static_cast<int>(members_.size()); }
    int n() const { return members_.empty() ? 0 : members_[0].dim(); }
    bool is_real() const { return real_; }
    const HermitianMatrix& operator[](int i) const { return members_[i]; }
    const std::vector<HermitianMatrix>& members() const { return members_; }

  private:
    std::vector<HermitianMatrix> members_;
    bool real_ = true;
};

/// Result of a successful simultaneous diagonalization: a nonsingular P with
/// P* C_i P real diagonal for every member.
struct CongruenceResult {
    Matrix transform;                            // the nonsingular P
    std::vector<std::vector<double>> diagonals;  // one real length-n vector per member
    double backward_error = 0.0;
};

/// Sum of squared moduli of all off-diagonal entries across the family.
double off2(const MatrixFamily& f);
double off2(const std::vector<Matrix>& mats);

/// True iff max over pairs of ||C_i C_j - C_j C_i||_F <= commute_tol ||C_i||_F ||C_j||_F.
bool is_commuting(const MatrixFamily& f, const Tolerances& tol = {});
/// Worst pairwise relative commutator norm (0 for m = 1).
double commutation_residual(const MatrixFamily& f);

/// max_i ||offdiag(U* C_i U)||_2 / ||U* C_i U||_2  (spectral norms).
double backward_error(const MatrixFamily& f, const Matrix& u);

/// U* C U, symmetrized exactly; imaginary parts cleared when both inputs are real.
HermitianMatrix congruence(const HermitianMatrix& c, const Matrix& u);

/// Stack the members vertically into an (m n) x n matrix.
Matrix stack_family(const MatrixFamily& f);

}  // namespace sdc
