#include "sdc/jointdiag.hpp"

#include <algorithm>
#include <cmath>

#include "sdc/eig.hpp"
#include "sdc/svd.hpp"

namespace sdc {

Matrix build_Muv(const std::vector<Matrix>& mats, int u, int v) {
    if (u >= v) throw DimensionError("build_Muv needs u < v");
    const int m = static_cast<int>(mats.size());
    Matrix muv(2 * m, 3);
    for (int i = 0; i < m; ++i) {
        const Matrix& c = mats[i];
        muv(2 * i, 0) = std::conj(c(u, v));
        muv(2 * i, 1) = std::conj(c(u, u)) - std::conj(c(v, v));
        muv(2 * i, 2) = -std::conj(c(v, u));
        muv(2 * i + 1, 0) = c(v, u);
        muv(2 * i + 1, 1) = c(u, u) - c(v, v);
        muv(2 * i + 1, 2) = -c(u, v);
    }
    return muv;
}

Matrix build_Muv(const MatrixFamily& f, int u, int v) {
    std::vector<Matrix> mats;
    mats.reserve(f.m());
    for (const auto& c : f.members()) mats.push_back(c.mat());
    return build_Muv(mats, u, v);
}

namespace {

double objective_z(const Matrix& m, cplx z0, cplx z1, cplx z2) {
    double s = 0;
    for (int r = 0; r < m.rows(); ++r)
        s += abs2(m(r, 0) * z0 + m(r, 1) * z1 + m(r, 2) * z2);
    return s;
}

}  // namespace

double muv_objective(const Matrix& muv, double theta, double phi) {
    const double c = std::cos(theta);
    const cplx s = std::polar(std::sin(theta), phi);
    return objective_z(muv, c * c, s * c, s * s);
}

Rotation optimal_rotation(const Matrix& muv, double current_off_contribution, bool real_mode) {
    struct Cand {
        double theta, phi;
    };
    std::vector<Cand> cands;

    // For Hermitian members the objective is a quadratic form in the unit
    // vector u = (cos 2t, sin 2t cos p, sin 2t sin p):
    //   sum_i |c'_vu|^2 = u^T Q u,  Q = sum_i [ |b|^2, e b_r, -e b_i ;
    //                                           e b_r, e^2 + b_i^2, b_r b_i ;
    //                                          -e b_i, b_r b_i, e^2 + b_r^2 ]
    // with b = c_uv and e = (c_uu - c_vv)/2, so the exact minimizer is the
    // smallest eigenvector of Q.
    {
        const int m = muv.rows() / 2;
        Matrix q(3, 3);
        for (int i = 0; i < m; ++i) {
            const cplx b = std::conj(muv(2 * i, 0));
            const double e = 0.5 * muv(2 * i, 1).real();
            const double br = b.real(), bi = b.imag();
            q(0, 0) += br * br + bi * bi;
            q(1, 1) += e * e + bi * bi;
            q(2, 2) += e * e + br * br;
            q(0, 1) += e * br;
            q(0, 2) += -e * bi;
            q(1, 2) += br * bi;
        }
        q(1, 0) = q(0, 1);
        q(2, 0) = q(0, 2);
        q(2, 1) = q(1, 2);
        const EigResult qe = hermitian_eig_mat(q);
        double u1 = qe.u(0, 2).real(), u2 = qe.u(1, 2).real(), u3 = qe.u(2, 2).real();
        if (real_mode) {
            // the imaginary-part coordinate decouples when every b is real
            u3 = 0.0;
            const double nrm = std::hypot(u1, u2);
            if (nrm > 0) { u1 /= nrm; u2 /= nrm; }
        }
        if (u1 < 0) { u1 = -u1; u2 = -u2; u3 = -u3; }
        const double s2t = std::hypot(u2, u3);
        const double theta = 0.5 * std::atan2(real_mode ? u2 : s2t, u1);
        const double phi = (!real_mode && s2t > 0) ? std::atan2(u3, u2) : 0.0;
        cands.push_back({theta, phi});
    }

    // smallest right singular vector of M projected onto the curve
    {
        SvdResult s = svd(muv);
        cplx z0 = s.v(0, 2), z1 = s.v(1, 2), z2 = s.v(2, 2);
        const double a0 = std::abs(z0), a2 = std::abs(z2);
        if (a0 > 1e-14) {
            const cplx ph = std::conj(z0) / a0;  // make z0 real positive
            z0 *= ph;
            z1 *= ph;
            z2 *= ph;
        }
        double theta, phi;
        if (a0 + a2 <= 1e-14) {
            // degenerate: z concentrates on the middle component, theta = pi/4
            theta = 0.25 * 3.14159265358979323846;
            phi = std::abs(z1) > 0 ? std::arg(z1) : 0.0;
        } else {
            theta = std::atan2(std::sqrt(a2), std::sqrt(std::max(z0.real(), 0.0)));
            if (std::abs(z1) > 1e-14) phi = std::arg(z1);
            else if (a2 > 1e-14) phi = 0.5 * std::arg(z2);
            else phi = 0.0;
        }
        if (real_mode) {
            // phi forced to 0; a sign flip of s is a sign flip of theta
            const double sgn = std::cos(phi) < 0 ? -1.0 : 1.0;
            cands.push_back({sgn * theta, 0.0});
        } else {
            cands.push_back({theta, phi});
        }
    }

    double best_obj = current_off_contribution;
    Rotation rot;  // identity unless something reduces the objective
    auto consider = [&](double theta, double phi) {
        const double o = muv_objective(muv, theta, phi);
        if (o < best_obj) {
            best_obj = o;
            rot.c = std::cos(theta);
            rot.s = real_mode ? cplx(std::sin(theta), 0.0) : std::polar(std::sin(theta), phi);
        }
    };
    for (const auto& cand : cands) consider(cand.theta, cand.phi);

    // fallback: coarse grid plus one Newton refinement, only when the closed
    // form and the singular-vector projection both fail to make progress
    if (best_obj > 0.5 * current_off_contribution) {
        const double pi = 3.14159265358979323846;
        double grid_obj = std::numeric_limits<double>::infinity();
        double bt = 0, bp = 0;
        const int nt = 64, np = real_mode ? 1 : 64;
        for (int it = 0; it < nt; ++it) {
            const double theta = -pi / 4 + (it + 0.5) * (pi / 2) / nt;
            for (int ip = 0; ip < np; ++ip) {
                const double phi = real_mode ? 0.0 : -pi + (ip + 0.5) * (2 * pi) / np;
                const double o = muv_objective(muv, theta, phi);
                if (o < grid_obj) { grid_obj = o; bt = theta; bp = phi; }
            }
        }
        // one Newton step on the grid minimum (finite differences)
        const double h = 1e-4;
        auto f = [&](double t, double p) { return muv_objective(muv, t, p); };
        if (real_mode) {
            const double d1 = (f(bt + h, bp) - f(bt - h, bp)) / (2 * h);
            const double d2 = (f(bt + h, bp) - 2 * grid_obj + f(bt - h, bp)) / (h * h);
            if (d2 > 0) {
                const double t2 = std::clamp(bt - d1 / d2, -pi / 4, pi / 4);
                if (f(t2, bp) < grid_obj) { grid_obj = f(t2, bp); bt = t2; }
            }
        } else {
            const double ft = (f(bt + h, bp) - f(bt - h, bp)) / (2 * h);
            const double fp = (f(bt, bp + h) - f(bt, bp - h)) / (2 * h);
            const double ftt = (f(bt + h, bp) - 2 * grid_obj + f(bt - h, bp)) / (h * h);
            const double fpp = (f(bt, bp + h) - 2 * grid_obj + f(bt, bp - h)) / (h * h);
            const double ftp = (f(bt + h, bp + h) - f(bt + h, bp - h) - f(bt - h, bp + h) +
                                f(bt - h, bp - h)) /
                               (4 * h * h);
            const double det = ftt * fpp - ftp * ftp;
            if (det > 0 && ftt > 0) {
                const double dt = (fpp * ft - ftp * fp) / det;
                const double dp = (ftt * fp - ftp * ft) / det;
                const double t2 = std::clamp(bt - dt, -pi / 4, pi / 4);
                const double p2 = bp - dp;
                if (f(t2, p2) < grid_obj) { bt = t2; bp = p2; }
            }
        }
        consider(bt, bp);
    }
    return rot;
}

namespace {

void rotate_family(std::vector<Matrix>& mats, Matrix& u_acc, int u, int v, double c, cplx s) {
    const cplx sbar = std::conj(s);
    const int n = u_acc.rows();
    for (auto& a : mats) {
        for (int i = 0; i < n; ++i) {  // columns (right-multiply by R^H)
            const cplx xu = a(i, u), xv = a(i, v);
            a(i, u) = c * xu - s * xv;
            a(i, v) = sbar * xu + c * xv;
        }
        for (int j = 0; j < n; ++j) {  // rows (left-multiply by R)
            const cplx xu = a(u, j), xv = a(v, j);
            a(u, j) = c * xu - sbar * xv;
            a(v, j) = s * xu + c * xv;
        }
    }
    for (int i = 0; i < n; ++i) {  // U <- U R^H
        const cplx xu = u_acc(i, u), xv = u_acc(i, v);
        u_acc(i, u) = c * xu - s * xv;
        u_acc(i, v) = sbar * xu + c * xv;
    }
}

}  // namespace

JointDiagResult joint_diagonalize(const MatrixFamily& f, const Tolerances& tol) {
    tol.validate();
    const int n = f.n();
    const bool real_mode = f.is_real();
    JointDiagResult res;
    res.commuting_on_entry = is_commuting(f, tol);

    std::vector<Matrix> mats;
    double norm_sum = 0, norm_sq_sum = 0;
    for (const auto& c : f.members()) {
        mats.push_back(c.mat());
        const double nf = c.frobenius_norm();
        norm_sum += nf;
        norm_sq_sum += nf * nf;
    }
    const double nu = tol.jacobi_eps * norm_sum;
    (void)norm_sq_sum;

    Matrix u_acc = Matrix::identity(n);
    double off = off2(mats);
    res.off2_history.push_back(off);

    int sweep = 0;
    for (; sweep < tol.max_sweeps && off > nu; ++sweep) {
        bool accepted_any = false;
        for (int u = 0; u < n - 1; ++u) {
            for (int v = u + 1; v < n; ++v) {
                // drift guard: ignore rotations whose predicted gain is
                // negligible relative to the current off2
                const double skip = 1e-18 * off;
                double contrib = 0;
                for (const auto& a : mats) contrib += abs2(a(u, v)) + abs2(a(v, u));
                if (contrib <= skip) continue;
                const Matrix muv = build_Muv(mats, u, v);
                const Rotation rot = optimal_rotation(muv, contrib, real_mode);
                if (rot.is_identity()) continue;
                if (contrib - objective_z(muv, rot.c * rot.c, rot.s * rot.c, rot.s * rot.s) <=
                    skip)
                    continue;
                // save the touched slices so a roundoff-increase can be reverted
                std::vector<Matrix> saved = mats;
                const Matrix saved_u = u_acc;
                rotate_family(mats, u_acc, u, v, rot.c, rot.s);
                const double off_new = off2(mats);
                if (off_new > off) {
                    mats = std::move(saved);
                    u_acc = saved_u;
                    continue;
                }
                off = off_new;
                res.off2_history.push_back(off);
                accepted_any = true;
            }
        }
        if (!accepted_any) { ++sweep; break; }
    }
    res.sweeps = sweep;
    res.final_off2 = off;
    res.converged = off <= nu;
    if (real_mode) u_acc.clear_imag();
    res.u = std::move(u_acc);
    return res;
}

}  // namespace sdc
