#pragma once

#include <optional>
#include <string>

#include "sdc/hermitian.hpp"
#include "sdc/schmudgen.hpp"

namespace sdc {

enum class Verdict { SDC, NOT_SDC };
enum class Route { SDP, PENCIL, BOTH };

struct DetectReason {
    enum class Kind {
        NonRealEigenvalue,   // C(hat)^-1 C_i has a genuinely complex eigenvalue
        NotDiagonalizable,   // rank test failed for an eigenvalue of C(hat)^-1 C_i
        NonCommutingPair,    // C_i C(hat)^-1 C_j not Hermitian
        MaxRankDeficient,    // max rank of the pencil < n - q
        TrivialSolutionSpace,
        NoPdFound,
        Note,
    };
    Kind kind;
    int i = -1, j = -1;
    std::string text;
};

std::string to_string(DetectReason::Kind kind);

struct DetectReport {
    Verdict verdict = Verdict::NOT_SDC;
    Route route = Route::PENCIL;
    int q = 0;                                   // joint kernel dimension
    std::optional<std::vector<double>> witness;  // max-rank point, pencil route
    int max_rank = -1;
    bool used_numeric_rank = false;
    std::vector<DetectReason> reasons;           // NOT_SDC carries at least one
};

struct DetectOptions {
    int symbolic_max_n = 12;   // above this the rank step samples numerically
    bool force_numeric = false;
};

/// Eigenvalues of a general complex matrix (Hessenberg reduction followed by
/// Wilkinson-shifted QR).  Throws ConvergenceError past the iteration budget.
std::vector<cplx> general_eigenvalues(const Matrix& a, const Tolerances& tol = {});

struct RealDiagResult {
    bool diagonalizable_real = false;
    bool spectrum_real = false;
    std::vector<cplx> eigenvalues;  // sorted by real part descending
};

/// Is M similar to a real diagonal matrix: every eigenvalue real (to
/// 1e-8 ||M||_F) and, for each distinct eigenvalue of multiplicity a,
/// rank(M - mu I) = n - a.
RealDiagResult is_real_diagonalizable(const Matrix& m, const Tolerances& tol = {});

/// Group a sorted-descending real diagonal into clusters of equal entries
/// (relative gap 1e-8); returns the cluster sizes.
std::vector<int> cluster_diagonal(const std::vector<double>& d);

struct BlockPartition {
    std::vector<Matrix> blocks;
    std::vector<int> offsets;
};

/// Extract the diagonal blocks of B induced by the grouping of the diagonal d
/// (d sorted descending, grouped by cluster_diagonal).  Throws
/// NotBlockDiagonalError when the off-block mass exceeds tolerance.
BlockPartition block_partition(const std::vector<double>& d, const Matrix& b,
                               const Tolerances& tol = {});

/// Pencil-route SDC decision: deflate the joint kernel,
/// find a max-rank witness (symbolic Schmuedgen, numeric sampling fallback),
/// then test real diagonalizability of C(hat)^-1 C_i and pairwise commutation
/// via Hermiticity of C_i C(hat)^-1 C_j.  All failing reasons are reported.
DetectReport detect_via_pencil(const MatrixFamily& f, const Tolerances& tol = {},
                               const DetectOptions& opts = {});

/// Unitary U simultaneously diagonalizing a commuting Hermitian family by
/// recursive eigen-decomposition and block partitioning.  The starting member
/// is the one with the fewest repeated eigenvalues.  Throws NotCommutingError.
Matrix sdc_commuting_recursive(const MatrixFamily& f, const Tolerances& tol = {});

}  // namespace sdc
