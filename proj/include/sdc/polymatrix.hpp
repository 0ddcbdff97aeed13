#pragma once

#include "sdc/hermitian.hpp"
#include "sdc/multipoly.hpp"

namespace sdc {

/// Dense matrix over MultiPoly.
class PolyMatrix {
  public:
    PolyMatrix() = default;
    PolyMatrix(int rows, int cols, int nvars)
        : rows_(rows), cols_(cols), nvars_(nvars),
          a_(static_cast<size_t>(rows) * cols, MultiPoly(nvars)) {}

    static PolyMatrix identity(int n, int nvars);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int nvars() const { return nvars_; }

    MultiPoly& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const MultiPoly& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    PolyMatrix operator*(const PolyMatrix& o) const;
    PolyMatrix operator+(const PolyMatrix& o) const;
    PolyMatrix operator-(const PolyMatrix& o) const;
    PolyMatrix scaled(const MultiPoly& s) const;

    /// Conjugate transpose as a polynomial matrix (coefficient conjugation).
    PolyMatrix adjoint() const;

    /// Hermitian as a polynomial matrix: p_uv = conj-coeff(p_vu) within coeff_tol.
    bool is_hermitian(double coeff_tol = 0.0) const;

    bool is_zero(double coeff_tol = 0.0) const;
    bool is_diagonal(double coeff_tol = 0.0) const;
    double max_abs_coeff() const;

    Matrix eval(std::span<const double> point) const;

  private:
    int rows_ = 0, cols_ = 0, nvars_ = 0;
    std::vector<MultiPoly> a_;
};

/// The Hermitian pencil C(lambda) = sum_i lambda_i C_i.
PolyMatrix pencil_from_family(const MatrixFamily& f);

/// Entrywise evaluation; Hermitian output for real points on Hermitian pencils.
Matrix eval_pencil(const PolyMatrix& pm, std::span<const double> point);

}  // namespace sdc
