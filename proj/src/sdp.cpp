#include "sdc/sdp.hpp"

#include <algorithm>
#include <cmath>

#include "sdc/eig.hpp"
#include "sdc/svd.hpp"

namespace sdc {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
}

HermitianMatrix LinearSystem::unpack(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != dim()) throw DimensionError("LinearSystem::unpack");
    Matrix a(n, n);
    int c = 0;
    for (int u = 0; u < n; ++u) a(u, u) = x[c++];
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            const double re = x[c++] / kSqrt2;
            a(u, v) = re;
            a(v, u) = re;
        }
    if (!real_sym) {
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) {
                const double im = x[c++] / kSqrt2;
                a(u, v) += cplx(0.0, im);
                a(v, u) -= cplx(0.0, im);
            }
    }
    return HermitianMatrix::wrap(a);
}

std::vector<double> LinearSystem::pack(const HermitianMatrix& x) const {
    if (x.dim() != n) throw DimensionError("LinearSystem::pack");
    std::vector<double> out;
    out.reserve(dim());
    for (int u = 0; u < n; ++u) out.push_back(x(u, u).real());
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) out.push_back(kSqrt2 * x(u, v).real());
    if (!real_sym)
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) out.push_back(kSqrt2 * x(u, v).imag());
    return out;
}

HermitianMatrix LinearSystem::row_representer(int row) const {
    std::vector<double> coords(dim());
    for (int c = 0; c < dim(); ++c) coords[c] = op(row, c).real();
    return unpack(coords);
}

LinearSystem build_system(const MatrixFamily& f) {
    LinearSystem sys;
    sys.n = f.n();
    sys.m = f.m();
    sys.real_sym = f.is_real();
    for (int i = 0; i < f.m(); ++i)
        for (int j = i + 1; j < f.m(); ++j) sys.pairs.emplace_back(i, j);
    const int n = sys.n;
    const int rows = static_cast<int>(sys.pairs.size()) * sys.rows_per_pair();
    sys.op = Matrix(rows, sys.dim());
    // normalize each pair block by ||C_i||_F ||C_j||_F so the operator is
    // well scaled; the kernel is unchanged
    std::vector<double> pair_scale;
    for (const auto& [i, j] : sys.pairs) {
        const double s = f[i].frobenius_norm() * f[j].frobenius_norm();
        pair_scale.push_back(s > 0 ? 1.0 / s : 1.0);
    }
    // every coordinate basis element is a e_u e_v^* + conj e_v e_u^* pair, so
    // C_i E C_j collapses to two vector outer products
    auto action = [&](int i, int j, int u, int v, cplx alpha) {
        Matrix k(n, n);
        const Matrix &ci = f[i].mat(), &cj = f[j].mat();
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) {
                cplx s = alpha * ci(p, u) * cj(v, q);
                if (u != v) s += std::conj(alpha) * ci(p, v) * cj(u, q);
                k(p, q) = s;
            }
        return k;
    };
    struct Coord {
        int u, v;
        cplx alpha;
    };
    std::vector<Coord> coords;
    coords.reserve(sys.dim());
    for (int u = 0; u < n; ++u) coords.push_back({u, u, 1.0});
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) coords.push_back({u, v, 1.0 / kSqrt2});
    if (!sys.real_sym)
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) coords.push_back({u, v, cplx(0.0, 1.0 / kSqrt2)});
    for (int c = 0; c < sys.dim(); ++c) {
        int r = 0;
        size_t pair_idx = 0;
        for (const auto& [i, j] : sys.pairs) {
            const auto& [u0, v0, alpha] = coords[c];
            const Matrix k = (action(i, j, u0, v0, alpha) - action(j, i, u0, v0, alpha)) *
                             cplx(pair_scale[pair_idx++], 0.0);
            if (sys.real_sym) {
                for (int u = 0; u < n; ++u)
                    for (int v = u + 1; v < n; ++v) sys.op(r++, c) = k(u, v).real();
            } else {
                for (int u = 0; u < n; ++u)
                    for (int v = u + 1; v < n; ++v) {
                        sys.op(r++, c) = k(u, v).real();
                        sys.op(r++, c) = k(u, v).imag();
                    }
                for (int u = 0; u < n; ++u) sys.op(r++, c) = k(u, u).imag();
            }
        }
    }
    return sys;
}

double constraint_residual(const MatrixFamily& f, const HermitianMatrix& x) {
    double worst = 0;
    for (int i = 0; i < f.m(); ++i)
        for (int j = i + 1; j < f.m(); ++j) {
            const Matrix k =
                f[i].mat() * x.mat() * f[j].mat() - f[j].mat() * x.mat() * f[i].mat();
            worst = std::max(worst, k.frobenius_norm());
        }
    return worst;
}

namespace {

// Null directions must satisfy the original matrix equations to contract
// tolerance; an accidental tiny-but-nonzero singular value inside the rank
// cutoff would otherwise smuggle an almost-solution into the space.
AffineSolutionSpace space_from_svd(const LinearSystem& sys, const MatrixFamily& f,
                                   const SvdResult& s, const Tolerances& tol) {
    AffineSolutionSpace space;
    space.n = sys.n;
    const int dim = sys.dim();
    const double smax = s.sigma.empty() ? 0.0 : s.sigma[0];
    const double cutoff = tol.rank_cutoff(sys.op.rows(), dim) * smax;
    double maxprod = 1.0;
    for (const auto& c : f.members())
        maxprod = std::max(maxprod, c.frobenius_norm() * c.frobenius_norm());
    for (int j = 0; j < dim; ++j) {
        if (s.sigma[j] > cutoff) continue;
        std::vector<double> coords(dim);
        for (int c = 0; c < dim; ++c) coords[c] = s.v(c, j).real();
        HermitianMatrix b = sys.unpack(coords);
        if (constraint_residual(f, b) > 1e-10 * maxprod) continue;
        space.basis.push_back(std::move(b));
    }
    return space;
}

}  // namespace

AffineSolutionSpace solution_space(const LinearSystem& sys, const MatrixFamily& f,
                                   const Tolerances& tol) {
    AffineSolutionSpace space;
    space.n = sys.n;
    if (sys.pairs.empty()) {
        // no constraints: the whole Hermitian space
        std::vector<double> e(sys.dim(), 0.0);
        for (int c = 0; c < sys.dim(); ++c) {
            e[c] = 1.0;
            space.basis.push_back(sys.unpack(e));
            e[c] = 0.0;
        }
        return space;
    }
    return space_from_svd(sys, f, svd(sys.op, tol), tol);
}

namespace {

struct AscentScratch {
    const AffineSolutionSpace& space;
    std::vector<double> trace_coords;  // Tr(B_c)
    double trace_norm2 = 0;

    explicit AscentScratch(const AffineSolutionSpace& s) : space(s) {
        trace_coords.resize(s.dim());
        for (int c = 0; c < s.dim(); ++c) {
            trace_coords[c] = s.basis[c].mat().trace().real();
            trace_norm2 += trace_coords[c] * trace_coords[c];
        }
    }

    Matrix assemble(const std::vector<double>& y) const {
        Matrix x(space.n, space.n);
        for (int c = 0; c < space.dim(); ++c) {
            if (y[c] == 0.0) continue;
            const Matrix& b = space.basis[c].mat();
            for (int i = 0; i < space.n; ++i)
                for (int j = 0; j < space.n; ++j) x(i, j) += y[c] * b(i, j);
        }
        return x;
    }

    double trace_of(const std::vector<double>& y) const {
        double t = 0;
        for (int c = 0; c < space.dim(); ++c) t += y[c] * trace_coords[c];
        return t;
    }

    // shift y along trace_coords so Tr X = n exactly
    bool fix_trace(std::vector<double>& y) const {
        if (trace_norm2 <= 1e-24) return false;
        const double shift = (space.n - trace_of(y)) / trace_norm2;
        for (int c = 0; c < space.dim(); ++c) y[c] += shift * trace_coords[c];
        return true;
    }
};

}  // namespace

FeasibilityOutcome find_pd(const AffineSolutionSpace& space, const Tolerances& tol) {
    FeasibilityOutcome out;
    if (space.dim() == 0) return out;  // empty space: NO_PD, best -inf sentinel

    AscentScratch scratch(space);
    const int dim = space.dim();
    const int n = space.n;
    if (scratch.trace_norm2 <= 1e-24) {
        // every element of the span is traceless, so none is PD
        out.best_min_eig = hermitian_eig_mat(scratch.assemble(
                               std::vector<double>(dim, 1.0 / std::sqrt(double(dim)))), tol)
                               .lam.back();
        out.best_min_eig = std::min(out.best_min_eig, 0.0);
        return out;
    }

    const double target = std::max(0.02, 100.0 * tol.pd_tol);
    const int budget = 5000;
    const int stall_window = 200;

    std::vector<std::vector<double>> starts;
    starts.push_back(scratch.trace_coords);  // coordinates of the projection of I
    for (int c = 0; c < dim; ++c) {
        std::vector<double> y(dim, 0.0);
        y[c] = scratch.trace_coords[c] >= 0 ? 1.0 : -1.0;
        starts.push_back(std::move(y));
    }

    std::vector<double> best_y;
    for (auto& y : starts) {
        if (!scratch.fix_trace(y)) continue;
        double stall_ref = -std::numeric_limits<double>::infinity();
        int stall_age = 0;
        // Polyak level: shrink the target toward the attainable optimum when
        // progress dries up, so the steps stop overshooting
        double tau = target;
        int level_age = 0;
        for (int k = 0; k < budget; ++k) {
            ++out.iterations;
            const Matrix x = scratch.assemble(y);
            EigResult e = hermitian_eig_mat(x, tol);
            const double lmin = e.lam.back();
            if (lmin > out.best_min_eig) {
                out.best_min_eig = lmin;
                best_y = y;
            }
            if (lmin > target) break;
            if (lmin >= tau) {
                tau = std::min(target, 2.0 * lmin + 1e-10);  // keep the level above the iterate
                level_age = 0;
            } else if (++level_age >= 50) {
                tau = std::max({2.0 * tol.pd_tol, 0.5 * (tau + std::max(out.best_min_eig, 0.0))});
                level_age = 0;
            }
            // subgradient of lambda_min is u u*; its span coordinates are u* B_c u
            std::vector<double> g(dim);
            double gdot_tr = 0;
            for (int c = 0; c < dim; ++c) {
                const Matrix& b = space.basis[c].mat();
                cplx s = 0;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        s += std::conj(e.u(i, n - 1)) * b(i, j) * e.u(j, n - 1);
                g[c] = s.real();
                gdot_tr += g[c] * scratch.trace_coords[c];
            }
            double gnorm2 = 0;
            for (int c = 0; c < dim; ++c) {
                g[c] -= gdot_tr / scratch.trace_norm2 * scratch.trace_coords[c];
                gnorm2 += g[c] * g[c];
            }
            if (gnorm2 <= 1e-28) break;
            // Polyak step toward the target, displacement-capped so near-flat
            // subgradients cannot inflate ||y|| (large combinations amplify
            // the basis residuals)
            double ynorm = 0;
            for (int c = 0; c < dim; ++c) ynorm += y[c] * y[c];
            ynorm = std::sqrt(ynorm);
            const double step =
                std::min((tau - lmin) / gnorm2, (1.0 + 2.0 * ynorm) / std::sqrt(gnorm2));
            for (int c = 0; c < dim; ++c) y[c] += step * g[c];
            scratch.fix_trace(y);

            if (out.best_min_eig > stall_ref + 1e-14) {
                stall_ref = out.best_min_eig;
                stall_age = 0;
            } else if (++stall_age >= stall_window) {
                break;
            }
        }
        // a solidly PD point ends the multi-start; remaining starts could only
        // polish the margin
        if (out.best_min_eig > 100.0 * tol.pd_tol) break;
    }

    if (out.best_min_eig > tol.pd_tol && !best_y.empty()) {
        out.verdict = FeasibilityVerdict::PD_FOUND;
        out.x = HermitianMatrix::wrap(scratch.assemble(best_y));
    }
    return out;
}

FeasibilityOutcome sdp_detect(const MatrixFamily& f, const Tolerances& tol) {
    if (f.m() == 1) {
        FeasibilityOutcome out;
        out.verdict = FeasibilityVerdict::PD_FOUND;
        out.x = HermitianMatrix::wrap(Matrix::identity(f.n()));
        out.best_min_eig = 1.0;
        return out;
    }
    const LinearSystem sys = build_system(f);
    const SvdResult osvd = svd(sys.op, tol);
    const AffineSolutionSpace space = space_from_svd(sys, f, osvd, tol);
    FeasibilityOutcome out = find_pd(space, tol);
    if (out.verdict == FeasibilityVerdict::PD_FOUND) {
        // one least-squares refinement of X against the operator: the basis
        // residuals accumulate over the combination, and the downstream
        // Jacobi floor tracks this residual directly
        const int dim = sys.dim();
        const int rows = sys.op.rows();
        const double smax = osvd.sigma.empty() ? 0.0 : osvd.sigma[0];
        std::vector<double> xfix = sys.pack(*out.x);
        for (int round = 0; round < 2; ++round) {
            std::vector<double> res(rows, 0.0);
            for (int r = 0; r < rows; ++r) {
                double s = 0;
                for (int c = 0; c < dim; ++c) s += sys.op(r, c).real() * xfix[c];
                res[r] = s;
            }
            for (int k = 0; k < dim && osvd.sigma[k] > 1e-9 * smax; ++k) {
                double proj = 0;
                for (int r = 0; r < rows; ++r) proj += osvd.u(r, k).real() * res[r];
                proj /= osvd.sigma[k];
                for (int c = 0; c < dim; ++c) xfix[c] -= proj * osvd.v(c, k).real();
            }
        }
        const HermitianMatrix polished = sys.unpack(xfix);
        if (constraint_residual(f, polished) <= constraint_residual(f, *out.x) &&
            hermitian_eig(polished, tol).lam.back() > tol.pd_tol)
            out.x = polished;

        double maxsq = 0;
        for (const auto& c : f.members()) {
            const double nf = c.frobenius_norm();
            maxsq = std::max(maxsq, nf * nf);
        }
        const double resid = constraint_residual(f, *out.x);
        if (resid > 1e-9 * std::max(out.x->frobenius_norm(), 1e-300) * std::max(maxsq, 1.0))
            throw ConvergenceError("find_pd returned X with an out-of-contract residual " +
                                   std::to_string(resid));
    }
    return out;
}

std::optional<HermitianMatrix> infeasibility_hint(const AffineSolutionSpace& space,
                                                  const MatrixFamily& f, const Tolerances& tol) {
    (void)space;
    if (!f.is_real() || f.m() < 2) return std::nullopt;
    const LinearSystem sys = build_system(f);
    // orthonormal basis of span{A_ij} = the row space of the operator
    RankResult r = svd_rank(sys.op, tol);
    AffineSolutionSpace rowspan;
    rowspan.n = sys.n;
    for (int j = 0; j < r.rank; ++j) {
        std::vector<double> coords(sys.dim());
        for (int c = 0; c < sys.dim(); ++c) coords[c] = r.v(c, j).real();
        rowspan.basis.push_back(sys.unpack(coords));
    }
    FeasibilityOutcome pd = find_pd(rowspan, tol);
    if (pd.verdict == FeasibilityVerdict::PD_FOUND) return pd.x;
    return std::nullopt;
}

}  // namespace sdc
