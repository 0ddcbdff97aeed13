#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace sdc {

using cplx = std::complex<double>;

inline double abs2(cplx z) { return z.real() * z.real() + z.imag() * z.imag(); }

/// Tunable tolerances shared across the library.  Every value is strictly
/// positive; see the field comments for how each one is applied.
struct Tolerances {
    /// Accept a raw matrix as Hermitian when max|A - A*| <= herm_tol * ||A||_F.
    double herm_tol = 1e-10;
    /// Relative SVD cutoff: sigma_i counts toward the rank when
    /// sigma_i > rank_tol * max(rows, cols) * sigma_max.
    double rank_tol = 1e-10;
    /// Pairwise commutation: ||AB - BA||_F <= commute_tol * ||A||_F * ||B||_F.
    /// The default leaves headroom for families squashed by an ill-conditioned
    /// PD congruence, where machine-floor commutators meet tiny member norms;
    /// genuine violations sit at 1e-3 and above on this measure.
    double commute_tol = 1e-7;
    /// Minimum-eigenvalue floor; find_pd declares success above this value on
    /// a trace-normalized candidate, pd_sqrt requires lambda_min > pd_tol * lambda_max.
    double pd_tol = 1e-8;
    /// The epsilon of the Jacobi sweep loop; stop once
    /// off2 <= jacobi_eps * sum_i ||C_i||_F.  Default is machine epsilon^(3/2).
    double jacobi_eps = 3.3087224502121107e-24;
    /// Jacobi sweep budget (joint diagonalization).
    int max_sweeps = 100;
    /// Witness sampling attempts before giving up.
    int sample_bound = 4096;
    /// Seed for every randomized search in the library.
    std::uint64_t rng_seed = 0;

    void validate() const {
        if (!(herm_tol > 0) || !(rank_tol > 0) || !(commute_tol > 0) || !(pd_tol > 0) ||
            !(jacobi_eps > 0) || max_sweeps <= 0 || sample_bound <= 0)
            throw std::invalid_argument("Tolerances: all fields must be strictly positive");
    }

    /// Effective relative rank cutoff for a rows x cols matrix.
    double rank_cutoff(int rows, int cols) const {
        return rank_tol * static_cast<double>(rows > cols ? rows : cols);
    }
};

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct NonFiniteError : Error {
    explicit NonFiniteError(const std::string& where) : Error("non-finite entry in " + where) {}
};

struct NotHermitianError : Error {
    double deviation;
    explicit NotHermitianError(double dev)
        : Error("matrix is not Hermitian (max deviation " + std::to_string(dev) + ")"),
          deviation(dev) {}
};

struct DimensionError : Error {
    explicit DimensionError(const std::string& what) : Error("dimension mismatch: " + what) {}
};

struct ConvergenceError : Error {
    explicit ConvergenceError(const std::string& what) : Error("convergence failure: " + what) {}
};

struct NotPositiveDefiniteError : Error {
    double min_eigenvalue;
    explicit NotPositiveDefiniteError(double lam)
        : Error("matrix is not positive definite (lambda_min " + std::to_string(lam) + ")"),
          min_eigenvalue(lam) {}
};

struct NoKernelError : Error {
    NoKernelError() : Error("family has trivial common kernel; nothing to deflate") {}
};

struct ZeroPivotError : Error {
    ZeroPivotError() : Error("pivot (1,1) is the zero polynomial; fix the pivot first") {}
};

struct IdenticallyZeroError : Error {
    IdenticallyZeroError() : Error("polynomial matrix is identically zero") {}
};

struct WitnessNotFoundError : Error {
    explicit WitnessNotFoundError(int attempts)
        : Error("no max-rank witness found after " + std::to_string(attempts) +
                " samples; suspect coefficient cancellation") {}
};

struct NotCommutingError : Error {
    NotCommutingError() : Error("family members do not pairwise commute") {}
};

struct NotBlockDiagonalError : Error {
    explicit NotBlockDiagonalError(double mass)
        : Error("off-block mass " + std::to_string(mass) + " violates the block structure") {}
};

struct VerdictConflictError : Error {
    explicit VerdictConflictError(const std::string& what) : Error("route disagreement: " + what) {}
};

inline bool is_finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace sdc
