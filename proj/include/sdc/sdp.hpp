#pragma once

#include <optional>

#include "sdc/hermitian.hpp"

namespace sdc {

/// Realified linear operator for the constraints C_i X C_j = C_j X C_i, i < j,
/// acting on Hermitian X.  Coordinates are an isometry for the Frobenius inner
/// product: x = (diag(X); sqrt(2) Re X_uv, u<v; sqrt(2) Im X_uv, u<v), so
/// ||x||_2 = ||X||_F and packing/unpacking preserve orthonormality.  Real
/// families use the symmetric specialization (no imaginary coordinates), which
/// is the trace form Tr(A_ij X) = 0 with one row per independent component.
class LinearSystem {
  public:
    int n = 0, m = 0;
    bool real_sym = false;
    std::vector<std::pair<int, int>> pairs;  // the C(m,2) constraint pairs
    Matrix op;                               // rows x dim real operator (stored complex)

    int dim() const { return real_sym ? n * (n + 1) / 2 : n * n; }
    int rows_per_pair() const { return real_sym ? n * (n - 1) / 2 : n * n; }

    HermitianMatrix unpack(const std::vector<double>& x) const;
    std::vector<double> pack(const HermitianMatrix& x) const;
    /// The symmetric/Hermitian representer of one operator row r:
    /// row_r . pack(X) = Tr(A_r X) for all Hermitian X.
    HermitianMatrix row_representer(int row) const;
};

/// Build the realified constraint operator (empty when m = 1).
LinearSystem build_system(const MatrixFamily& f);

struct AffineSolutionSpace {
    int n = 0;
    std::vector<HermitianMatrix> basis;  // Frobenius-orthonormal, pairwise orthogonal
    int dim() const { return static_cast<int>(basis.size()); }
};

/// Kernel of the constraint operator via SVD; each basis element is verified
/// against the original matrix equations.
AffineSolutionSpace solution_space(const LinearSystem& sys, const MatrixFamily& f,
                                   const Tolerances& tol = {});

enum class FeasibilityVerdict { PD_FOUND, NO_PD_WITHIN_TOL };

struct FeasibilityOutcome {
    FeasibilityVerdict verdict = FeasibilityVerdict::NO_PD_WITHIN_TOL;
    std::optional<HermitianMatrix> x;  // present on PD_FOUND, trace-normalized
    double best_min_eig = -std::numeric_limits<double>::infinity();
    int iterations = 0;
};

/// Maximize lambda_min over {X in span(basis), Tr X = n} by projected
/// subgradient ascent with multi-start; PD_FOUND once lambda_min > pd_tol.
FeasibilityOutcome find_pd(const AffineSolutionSpace& space, const Tolerances& tol = {});

/// Stage-1 detector of the main pipeline: build, solve, and verify the
/// constraint residual of the returned X.
FeasibilityOutcome sdp_detect(const MatrixFamily& f, const Tolerances& tol = {});

/// Worst constraint residual ||C_i X C_j - C_j X C_i||_F over all pairs.
double constraint_residual(const MatrixFamily& f, const HermitianMatrix& x);

/// Best-effort non-SDC certificate for real families (a positive definite
/// combination of the constraint representers A_ij).  Absence of a
/// certificate decides nothing.
std::optional<HermitianMatrix> infeasibility_hint(const AffineSolutionSpace& space,
                                                  const MatrixFamily& f,
                                                  const Tolerances& tol = {});

}  // namespace sdc
