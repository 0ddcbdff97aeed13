#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdc/types.hpp"

namespace sdc {

/// Sparse multivariate polynomial in real parameters lambda_1..lambda_nvars
/// with complex double coefficients.  Terms are kept in a canonical graded
/// colex order; arithmetic is exact for integer-valued inputs (only +, -, *
/// are ever applied) as long as every coefficient stays below 2^53, after
/// which ordinary double rounding applies.  "Identically zero" decisions take
/// an explicit coefficient threshold chosen by the caller from the input
/// scale.
class MultiPoly {
  public:
    MultiPoly() = default;
    explicit MultiPoly(int nvars) : nvars_(nvars) {}

    static MultiPoly constant(int nvars, cplx c);
    static MultiPoly variable(int nvars, int index, cplx coeff = 1.0);
    static MultiPoly monomial(int nvars, std::span<const std::uint16_t> exps, cplx coeff);

    int nvars() const { return nvars_; }
    int term_count() const { return static_cast<int>(coeffs_.size()); }
    bool is_zero() const { return coeffs_.empty(); }
    bool is_zero(double coeff_tol) const;
    int degree() const;
    bool is_homogeneous() const;
    double max_abs_coeff() const;

    std::span<const std::uint16_t> exponent(int term) const {
        return {exps_.data() + static_cast<size_t>(term) * nvars_, static_cast<size_t>(nvars_)};
    }
    cplx coeff(int term) const { return coeffs_[term]; }

    MultiPoly operator+(const MultiPoly& o) const;
    MultiPoly operator-(const MultiPoly& o) const;
    MultiPoly operator*(const MultiPoly& o) const;
    MultiPoly operator-() const;
    MultiPoly operator*(cplx s) const;
    bool operator==(const MultiPoly& o) const;

    /// Coefficient-wise complex conjugate (lambda stays real, so this is the
    /// polynomial adjoint).
    MultiPoly conj_coeffs() const;
    /// Coefficient-wise real / imaginary part.
    MultiPoly real_part() const;
    MultiPoly imag_part() const;

    cplx eval(std::span<const double> point) const;

    /// Exact division: returns the quotient when `divisor` divides this
    /// polynomial with every remainder coefficient below coeff_tol, nullopt
    /// otherwise.
    std::optional<MultiPoly> divide_exact(const MultiPoly& divisor, double coeff_tol) const;

    /// Canonical rendering, graded lexicographic term order,
    /// e.g. "(-3+2i)·λ1^2·λ3".
    std::string to_string() const;

    /// Strip coefficients with |c| <= coeff_tol.
    MultiPoly pruned(double coeff_tol) const;

    /// Raw term construction for tests; terms may arrive in any order.
    static MultiPoly from_terms(int nvars, const std::vector<std::pair<std::vector<std::uint16_t>, cplx>>& terms);

  private:
    int nvars_ = 0;
    std::vector<std::uint16_t> exps_;  // term_count * nvars, canonical order
    std::vector<cplx> coeffs_;

    void push_term(std::span<const std::uint16_t> e, cplx c);
    void normalize();  // sort + combine + drop exact zeros
    friend MultiPoly mul_dense_homog(const MultiPoly& a, const MultiPoly& b);
    friend MultiPoly mul_sparse(const MultiPoly& a, const MultiPoly& b);
};

inline MultiPoly operator*(cplx s, const MultiPoly& p) { return p * s; }

}  // namespace sdc
