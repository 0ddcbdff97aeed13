#pragma once

#include <memory>
#include <optional>

#include "sdc/polymatrix.hpp"

namespace sdc {

/// Elementary congruence used to make a pivot nonzero: either a symmetric
/// swap of rows/columns i<->j, or row_i += w row_j (and col_i += conj(w) col_j)
/// with w in {1, i}.
struct ElementaryMove {
    enum class Kind { Swap, AddRow, AddRowTimesI };
    Kind kind;
    int i = 0, j = 0;
};

struct PivotFix {
    int step = 0;  // 0-based elimination step the fix precedes
    std::vector<ElementaryMove> ops;
};

/// Apply one elementary congruence in place: Pm <- E Pm E*.
void apply_move(PolyMatrix& pm, const ElementaryMove& op);
/// The matrix E of a fix (ops composed left to right), embedded at `offset`
/// inside an n x n identity.
PolyMatrix fix_matrix(const PivotFix& fix, int n, int offset, int nvars, bool inverse = false);

/// Make the (1,1) entry a nonzero polynomial by a congruence with constant
/// nonzero determinant.  Prefers symmetric permutations; falls back to adding
/// a row/column (possibly scaled by i) when the whole diagonal vanishes.
/// Throws IdenticallyZeroError when the matrix itself is zero.
std::pair<PolyMatrix, PivotFix> ensure_nonzero_pivot(const PolyMatrix& pm, double coeff_tol = 0.0);

/// Product of powers of shared factor polynomials times an explicit tail.
/// The Schmuedgen trace stores its alpha/d/b entries in this form because the
/// expanded polynomials grow geometrically; expand() is exact and on demand.
class FactoredPoly {
  public:
    FactoredPoly() = default;
    FactoredPoly(std::shared_ptr<const std::vector<MultiPoly>> table, std::vector<int> exps,
                 MultiPoly tail);

    int nvars() const { return tail_.nvars(); }
    int degree() const;
    const std::vector<int>& factor_exponents() const { return exps_; }
    const MultiPoly& tail() const { return tail_; }
    cplx eval(std::span<const double> point) const;
    MultiPoly expand() const;

  private:
    std::shared_ptr<const std::vector<MultiPoly>> table_;
    std::vector<int> exps_;
    MultiPoly tail_;  // constant 1 when the value is a pure factor product
};

/// Polynomial matrix held as (factored scalar) x (small-coefficient matrix).
/// The elimination factors factor exactly this way, and evaluating through
/// the factored form avoids the catastrophic cancellation that expanded
/// coefficients (which grow geometrically) would cause.
struct ScaledPolyMatrix {
    FactoredPoly scale;
    PolyMatrix mat;

    Matrix eval(std::span<const double> point) const;
    PolyMatrix expand() const;  // scale.expand() * mat
};

/// Full record of a Schmuedgen diagonalization of a Hermitian pencil.
struct SchmudgenTrace {
    int n = 0;
    int nvars = 0;
    int steps = 0;                  // k: eliminations performed
    PolyMatrix pencil;              // the input C(lambda)
    std::vector<MultiPoly> alphas;  // expanded pivots alpha_1..alpha_k
    std::vector<FactoredPoly> alphas_factored;  // same pivots over the factor table
    std::vector<FactoredPoly> ds;   // d_1..d_n (alpha_j^3 prod alpha_t^2, then block diagonal)
    std::vector<bool> d_zero;       // identically-zero flags, zeros sorted last
    FactoredPoly b;                 // prod alpha_t
    std::vector<PivotFix> pivot_moves;
    double coeff_zero_tol = 0.0;    // snap threshold used for the zero decisions
    std::shared_ptr<const std::vector<MultiPoly>> factor_table;  // shared by the FactoredPolys

    // X- and X+ as factor lists; factors are applied oldest first, so
    // X- = xminus_factors.back() * ... * xminus_factors.front() and
    // X+ = xplus_factors.front() * ... * xplus_factors.back().
    std::vector<ScaledPolyMatrix> xminus_factors;
    std::vector<ScaledPolyMatrix> xplus_factors;

    PolyMatrix xminus() const;  // expanded (geometric cost; small n only)
    PolyMatrix xplus() const;
    Matrix xminus_eval(std::span<const double> point) const;
    Matrix xplus_eval(std::span<const double> point) const;
    MultiPoly d_expanded(int j) const { return ds[j].expand(); }
    int max_rank() const;  // #{d_j not identically zero}
};

/// Stepwise driver.  schmudgen_step performs one elimination of the current
/// block (throws ZeroPivotError if the pivot polynomial vanishes; call
/// schmudgen_fix_pivot first).  Internally the chain is carried in the exact
/// Bareiss-reduced form, which produces the same polynomials as the textbook
/// update alpha_k (alpha_k Chat - beta* beta) at a fraction of the cost.
class SchmudgenState {
  public:
    explicit SchmudgenState(const PolyMatrix& pencil);

    bool finished() const;        // current block is diagonal (or empty)
    PolyMatrix current() const;   // the running block C_k, expanded
    int block_size() const;
    SchmudgenTrace finish();      // finalize trace (sorts zero d's last)

    void step();                  // one elimination
    void fix_pivot();             // ensure_nonzero_pivot on the running block

    double zero_tol() const;

  private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

/// Run the procedure to completion.
SchmudgenTrace schmudgen_run(const PolyMatrix& pencil, const Tolerances& tol = {});

struct MaxRankWitness {
    int r = 0;
    std::vector<double> lambda_hat;
};

/// Maximum rank r = #{d_j != 0} plus a real integer point lambda_hat with
/// b(lambda_hat) prod_{t<=r} d_t(lambda_hat) != 0.  Deterministic expanding
/// integer boxes seeded by tol.rng_seed; when r = n the witness maximizes
/// |det C(lambda_hat)| over the accepted samples.
MaxRankWitness max_rank_witness(const SchmudgenTrace& trace, const Tolerances& tol = {});

/// True when b and d_1..d_r are all nonzero at the (normalized) point.
bool witness_valid(const SchmudgenTrace& trace, std::span<const double> point);

/// Sampling estimate of the maximum pencil rank (fallback for large n):
/// evaluates the pencil at random points and takes the best numeric rank;
/// stops early when `upper_bound` is attained.
MaxRankWitness max_rank_numeric(const PolyMatrix& pencil, const Tolerances& tol, int upper_bound,
                                int samples = 200);

}  // namespace sdc
