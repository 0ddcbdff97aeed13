#pragma once

#include "sdc/hermitian.hpp"

namespace sdc {

/// Complex plane rotation R(u,v,c,s) with c = cos(theta) real,
/// s = e^{i phi} sin(theta), |c|^2 + |s|^2 = 1.
struct Rotation {
    int u = 0, v = 1;
    double c = 1.0;
    cplx s = 0.0;
    bool is_identity() const { return c == 1.0 && s == cplx(0.0, 0.0); }
};

struct JointDiagResult {
    Matrix u;                          // unitary accumulated transform
    double final_off2 = 0.0;
    int sweeps = 0;
    std::vector<double> off2_history;  // off2 after every accepted rotation
    bool converged = false;            // final_off2 <= nu(eps)
    bool commuting_on_entry = true;
};

/// The 2m x 3 coefficient matrix whose rows per member i are
/// (conj c_uv, conj c_uu - conj c_vv, -conj c_vu) and (c_vu, c_uu - c_vv, -c_uv);
/// ||M z||_2 with z = (c^2, sc, s^2) is the off2 contribution of the (u,v)
/// entries after rotating.
Matrix build_Muv(const std::vector<Matrix>& mats, int u, int v);
Matrix build_Muv(const MatrixFamily& f, int u, int v);

/// Minimize ||M z||_2 over the curve z = (c^2, sc, s^2).  Candidates: the
/// exact closed form (the objective is a quadratic form in the unit vector
/// (cos 2t, sin 2t cos p, sin 2t sin p), minimized by a 3x3 eigenvector),
/// the smallest right singular vector of M projected onto the curve, and --
/// when neither makes progress -- a 64 x 64 grid over (theta, phi) with one
/// Newton refinement.  Returns the identity rotation when no candidate
/// reduces the objective.
Rotation optimal_rotation(const Matrix& muv, double current_off_contribution,
                          bool real_mode = false);

/// ||M z(theta, phi)||_2^2 for the rotation parameters.
double muv_objective(const Matrix& muv, double theta, double phi);

/// Simultaneous unitary diagonalization of a commuting Hermitian family by
/// cyclic Jacobi sweeps (lexicographic pair order).  Monotone in measured
/// off2: a rotation that fails to decrease the recomputed value is reverted.
/// Real families are processed with phi = 0 throughout, so U is real
/// orthogonal and the outputs carry exactly zero imaginary parts.
JointDiagResult joint_diagonalize(const MatrixFamily& f, const Tolerances& tol = {});

}  // namespace sdc
