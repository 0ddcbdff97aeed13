#include "sdc/detect.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sdc/eig.hpp"
#include "sdc/sdp.hpp"
#include "sdc/svd.hpp"

namespace sdc {

std::string to_string(DetectReason::Kind kind) {
    switch (kind) {
        case DetectReason::Kind::NonRealEigenvalue: return "NonRealEigenvalue";
        case DetectReason::Kind::NotDiagonalizable: return "NotDiagonalizable";
        case DetectReason::Kind::NonCommutingPair: return "NonCommutingPair";
        case DetectReason::Kind::MaxRankDeficient: return "MaxRankDeficient";
        case DetectReason::Kind::TrivialSolutionSpace: return "TrivialSolutionSpace";
        case DetectReason::Kind::NoPdFound: return "NoPdFound";
        case DetectReason::Kind::Note: return "Note";
    }
    return "?";
}

namespace {

void hessenberg_reduce(Matrix& h) {
    const int n = h.rows();
    for (int k = 0; k + 2 < n; ++k) {
        double sigma2 = 0;
        for (int i = k + 1; i < n; ++i) sigma2 += abs2(h(i, k));
        const double sigma = std::sqrt(sigma2);
        if (sigma <= 1e-300) continue;
        std::vector<cplx> v(n - k - 1);
        for (int i = 0; i < n - k - 1; ++i) v[i] = h(k + 1 + i, k);
        const cplx x0 = v[0];
        const cplx phase = std::abs(x0) > 0 ? x0 / std::abs(x0) : cplx(1.0, 0.0);
        const cplx alpha = -phase * sigma;
        v[0] -= alpha;
        double vnorm2 = 0;
        for (const auto& z : v) vnorm2 += abs2(z);
        if (vnorm2 <= 1e-300) continue;
        const double beta = 2.0 / vnorm2;
        // rows k+1..n-1: H <- (I - beta v v*) H
        for (int j = 0; j < n; ++j) {
            cplx w = 0;
            for (int i = 0; i < n - k - 1; ++i) w += std::conj(v[i]) * h(k + 1 + i, j);
            w *= beta;
            for (int i = 0; i < n - k - 1; ++i) h(k + 1 + i, j) -= w * v[i];
        }
        // cols k+1..n-1: H <- H (I - beta v v*)
        for (int i = 0; i < n; ++i) {
            cplx w = 0;
            for (int j = 0; j < n - k - 1; ++j) w += h(i, k + 1 + j) * v[j];
            w *= beta;
            for (int j = 0; j < n - k - 1; ++j) h(i, k + 1 + j) -= w * std::conj(v[j]);
        }
        h(k + 1, k) = alpha;
        for (int i = k + 2; i < n; ++i) h(i, k) = 0.0;
    }
}

}  // namespace

std::vector<cplx> general_eigenvalues(const Matrix& a, const Tolerances& tol) {
    (void)tol;
    if (a.rows() != a.cols()) throw DimensionError("general_eigenvalues");
    if (!a.all_finite()) throw NonFiniteError("general_eigenvalues");
    const int n = a.rows();
    if (n == 0) return {};
    Matrix h = a;
    hessenberg_reduce(h);
    const double eps = 2.220446049250313e-16;
    int m = n - 1;
    int iters = 0;
    const int budget = 60 * n;
    while (m > 0) {
        int l = m;
        while (l > 0 &&
               std::abs(h(l, l - 1)) > eps * (std::abs(h(l - 1, l - 1)) + std::abs(h(l, l))))
            --l;
        if (l == m) {
            --m;
            continue;
        }
        if (l > 0) h(l, l - 1) = 0.0;
        if (++iters > budget)
            throw ConvergenceError("general_eigenvalues: QR iteration budget exhausted");
        // Wilkinson shift from the trailing 2x2 of the active block
        const cplx aa = h(m - 1, m - 1), bb = h(m - 1, m), cc = h(m, m - 1), dd = h(m, m);
        const cplx tr = aa + dd, det = aa * dd - bb * cc;
        const cplx disc = std::sqrt(tr * tr - 4.0 * det);
        const cplx r1 = 0.5 * (tr + disc), r2 = 0.5 * (tr - disc);
        const cplx mu = std::abs(r1 - dd) < std::abs(r2 - dd) ? r1 : r2;
        // explicit QR sweep on the window [l, m]
        const int w = m - l + 1;
        std::vector<double> cs(w - 1);
        std::vector<cplx> ss(w - 1);
        for (int i = l; i < m; ++i) h(i, i) -= mu;
        h(m, m) -= mu;
        for (int i = l; i < m; ++i) {
            const cplx x = h(i, i), y = h(i + 1, i);
            const double r = std::sqrt(abs2(x) + abs2(y));
            double c;
            cplx s;
            if (r <= 1e-300) { c = 1.0; s = 0.0; }
            else if (std::abs(x) <= 1e-300 * r) { c = 0.0; s = 1.0; }
            else {
                c = std::abs(x) / r;
                s = c * y / x;
            }
            cs[i - l] = c;
            ss[i - l] = s;
            for (int j = i; j <= m; ++j) {  // rows i, i+1
                const cplx hi = h(i, j), hk = h(i + 1, j);
                h(i, j) = c * hi + std::conj(s) * hk;
                h(i + 1, j) = -s * hi + c * hk;
            }
        }
        for (int i = l; i < m; ++i) {  // columns i, i+1 (right-multiply by G)
            const double c = cs[i - l];
            const cplx s = ss[i - l];
            for (int r3 = l; r3 <= m; ++r3) {
                const cplx hi = h(r3, i), hk = h(r3, i + 1);
                h(r3, i) = c * hi + s * hk;
                h(r3, i + 1) = -std::conj(s) * hi + c * hk;
            }
        }
        for (int i = l; i < m; ++i) h(i, i) += mu;
        h(m, m) += mu;
    }
    std::vector<cplx> eig(n);
    for (int i = 0; i < n; ++i) eig[i] = h(i, i);
    std::sort(eig.begin(), eig.end(), [](cplx x, cplx y) {
        if (x.real() != y.real()) return x.real() > y.real();
        return x.imag() > y.imag();
    });
    return eig;
}

std::vector<int> cluster_diagonal(const std::vector<double>& d) {
    std::vector<int> sizes;
    if (d.empty()) return sizes;
    double scale = 0;
    for (double x : d) scale = std::max(scale, std::abs(x));
    const double gap = 1e-8 * std::max(scale, 1e-300);
    sizes.push_back(1);
    for (size_t i = 1; i < d.size(); ++i) {
        if (std::abs(d[i] - d[i - 1]) <= gap) ++sizes.back();
        else sizes.push_back(1);
    }
    return sizes;
}

RealDiagResult is_real_diagonalizable(const Matrix& m, const Tolerances& tol) {
    RealDiagResult res;
    res.eigenvalues = general_eigenvalues(m, tol);
    const int n = m.rows();
    const double scale = std::max(m.frobenius_norm(), 1e-300);
    res.spectrum_real = true;
    for (const auto& ev : res.eigenvalues)
        if (std::abs(ev.imag()) > 1e-8 * scale) res.spectrum_real = false;
    if (!res.spectrum_real) return res;

    std::vector<double> re(n);
    for (int i = 0; i < n; ++i) re[i] = res.eigenvalues[i].real();
    const std::vector<int> sizes = cluster_diagonal(re);
    res.diagonalizable_real = true;
    int off = 0;
    for (int sz : sizes) {
        double mu = 0;
        for (int i = 0; i < sz; ++i) mu += re[off + i];
        mu /= sz;
        Matrix shifted = m;
        for (int i = 0; i < n; ++i) shifted(i, i) -= mu;
        // the rank cutoff must scale with M, not with the shifted matrix:
        // when mu exhausts M (e.g. M = mu I + noise) the largest singular
        // value of the shift is itself noise
        const SvdResult s = svd(shifted, tol);
        const double cutoff =
            tol.rank_cutoff(n, n) * std::max(s.sigma.empty() ? 0.0 : s.sigma[0], scale);
        int rank = 0;
        while (rank < n && s.sigma[rank] > cutoff) ++rank;
        if (rank != n - sz) {
            res.diagonalizable_real = false;
            break;
        }
        off += sz;
    }
    return res;
}

BlockPartition block_partition(const std::vector<double>& d, const Matrix& b,
                               const Tolerances& tol) {
    (void)tol;
    if (static_cast<int>(d.size()) != b.rows() || b.rows() != b.cols())
        throw DimensionError("block_partition");
    const std::vector<int> sizes = cluster_diagonal(d);
    BlockPartition part;
    double off_mass = 0;
    int off = 0;
    for (int sz : sizes) {
        part.offsets.push_back(off);
        part.blocks.push_back(b.block(off, off + sz, off, off + sz));
        off += sz;
    }
    for (int i = 0; i < b.rows(); ++i) {
        for (int j = 0; j < b.cols(); ++j) {
            // inside some diagonal block?
            bool inside = false;
            for (size_t t = 0; t < sizes.size(); ++t) {
                const int o = part.offsets[t], s = sizes[t];
                if (i >= o && i < o + s && j >= o && j < o + s) { inside = true; break; }
            }
            if (!inside) off_mass += abs2(b(i, j));
        }
    }
    off_mass = std::sqrt(off_mass);
    if (off_mass > 1e-8 * std::max(b.frobenius_norm(), 1e-300))
        throw NotBlockDiagonalError(off_mass);
    return part;
}

Matrix sdc_commuting_recursive(const MatrixFamily& f, const Tolerances& tol) {
    if (!is_commuting(f, tol)) throw NotCommutingError();
    const int n = f.n(), m = f.m();
    if (n == 1) return Matrix::identity(1);

    // starting matrix: fewest repeated eigenvalues, i.e. most distinct clusters
    std::vector<EigResult> eigs(m);
    int pivot = 0, best_distinct = -1;
    for (int i = 0; i < m; ++i) {
        eigs[i] = hermitian_eig(f[i], tol);
        const int distinct = static_cast<int>(cluster_diagonal(eigs[i].lam).size());
        if (distinct > best_distinct) {
            best_distinct = distinct;
            pivot = i;
        }
    }
    if (best_distinct <= 1) return Matrix::identity(n);  // every member is a scalar multiple of I

    const Matrix& p = eigs[pivot].u;
    const std::vector<int> sizes = cluster_diagonal(eigs[pivot].lam);
    if (static_cast<int>(sizes.size()) == n) return p;  // simple spectrum: done

    // block partition every other member in the pivot eigenbasis and recurse
    std::vector<BlockPartition> parts;
    std::vector<int> others;
    for (int i = 0; i < m; ++i) {
        if (i == pivot) continue;
        others.push_back(i);
        parts.push_back(block_partition(eigs[pivot].lam, congruence(f[i], p).mat(), tol));
    }
    Matrix u(n, n);
    int off = 0;
    for (size_t t = 0; t < sizes.size(); ++t) {
        const int sz = sizes[t];
        Matrix qt = Matrix::identity(sz);
        if (sz > 1 && !others.empty()) {
            std::vector<HermitianMatrix> sub;
            for (size_t k = 0; k < others.size(); ++k)
                sub.push_back(HermitianMatrix::wrap(parts[k].blocks[t]));
            qt = sdc_commuting_recursive(MatrixFamily(std::move(sub)), tol);
        }
        for (int i = 0; i < sz; ++i)
            for (int j = 0; j < sz; ++j) u(off + i, off + j) = qt(i, j);
        off += sz;
    }
    Matrix result = p * u;
    if (f.is_real()) result.clear_imag();
    return result;
}

DetectReport detect_via_pencil(const MatrixFamily& f, const Tolerances& tol,
                               const DetectOptions& opts) {
    DetectReport rep;
    rep.route = Route::PENCIL;
    const int n = f.n();

    double maxnorm = 0;
    for (const auto& c : f.members()) maxnorm = std::max(maxnorm, c.frobenius_norm());
    if (maxnorm == 0) {  // the zero family is diagonal already
        rep.verdict = Verdict::SDC;
        rep.q = n;
        rep.max_rank = 0;
        return rep;
    }

    KernelResult ker = common_kernel(f, tol);
    if (ker.q > 0) {
        DeflationResult defl = deflate_common_kernel(f, tol);
        DetectReport inner = detect_via_pencil(defl.reduced, tol, opts);
        inner.q += defl.q;
        return inner;
    }

    const PolyMatrix pencil = pencil_from_family(f);
    MaxRankWitness wit;
    bool symbolic = !opts.force_numeric && n <= opts.symbolic_max_n;
    if (symbolic) {
        // pivot degrees triple per elimination; bail out to sampling when the
        // monomial basis of the last pivot would be unworkably large
        const double deg = std::pow(3.0, std::max(0, n - 2));
        double basis = 1;
        for (int i = 1; i < f.m() && basis < 1e18; ++i) basis *= (deg + i) / i;
        if (basis > 1e6) symbolic = false;
    }
    if (!symbolic) {
        wit = max_rank_numeric(pencil, tol, n);
        rep.used_numeric_rank = true;
    } else {
        try {
            const SchmudgenTrace trace = schmudgen_run(pencil, tol);
            wit = max_rank_witness(trace, tol);
        } catch (const WitnessNotFoundError& e) {
            // no usable witness point: fall back to the feasibility detector
            const FeasibilityOutcome feas = sdp_detect(f, tol);
            rep.route = Route::SDP;
            rep.verdict = feas.verdict == FeasibilityVerdict::PD_FOUND ? Verdict::SDC
                                                                       : Verdict::NOT_SDC;
            rep.reasons.push_back({DetectReason::Kind::Note, -1, -1,
                                   std::string("symbolic witness search failed (") + e.what() +
                                       "); verdict taken from the feasibility route"});
            if (rep.verdict == Verdict::NOT_SDC)
                rep.reasons.push_back({DetectReason::Kind::NoPdFound, -1, -1,
                                       "best min eigenvalue reached " +
                                           std::to_string(feas.best_min_eig)});
            return rep;
        } catch (const Error& e) {
            // symbolic breakdown (e.g. non-integer data defeating the exact
            // divisions): the sampling estimate takes over
            rep.reasons.push_back({DetectReason::Kind::Note, -1, -1,
                                   std::string("symbolic rank run failed (") + e.what() +
                                       "); falling back to numeric rank sampling"});
            wit = max_rank_numeric(pencil, tol, n);
            rep.used_numeric_rank = true;
        }
    }
    rep.max_rank = wit.r;
    if (wit.r < n) {
        rep.verdict = Verdict::NOT_SDC;
        rep.reasons.push_back({DetectReason::Kind::MaxRankDeficient, -1, -1,
                               "max pencil rank " + std::to_string(wit.r) + " < " +
                                   std::to_string(n)});
        return rep;
    }
    rep.witness = wit.lambda_hat;

    const Matrix chat = eval_pencil(pencil, wit.lambda_hat);
    const Matrix chat_inv = inverse(chat);
    for (int i = 0; i < f.m(); ++i) {
        const RealDiagResult rd = is_real_diagonalizable(chat_inv * f[i].mat(), tol);
        if (!rd.spectrum_real)
            rep.reasons.push_back({DetectReason::Kind::NonRealEigenvalue, i, -1,
                                   "C(hat)^-1 C_" + std::to_string(i + 1) +
                                       " has complex eigenvalues"});
        else if (!rd.diagonalizable_real)
            rep.reasons.push_back({DetectReason::Kind::NotDiagonalizable, i, -1,
                                   "C(hat)^-1 C_" + std::to_string(i + 1) +
                                       " is not similar to a real diagonal matrix"});
    }
    for (int i = 0; i < f.m(); ++i) {
        for (int j = i + 1; j < f.m(); ++j) {
            const Matrix a = f[i].mat() * chat_inv * f[j].mat();
            const double herm_dev = (a - a.adjoint()).frobenius_norm();
            // sqrt(commute_tol) leaves room for the conditioning of C(hat):
            // true violations are O(1) relative, roundoff stays below 1e-9
            if (herm_dev > std::sqrt(tol.commute_tol) * std::max(a.frobenius_norm(), 1e-300))
                rep.reasons.push_back({DetectReason::Kind::NonCommutingPair, i, j,
                                       "C_" + std::to_string(i + 1) + " C(hat)^-1 C_" +
                                           std::to_string(j + 1) + " is not Hermitian"});
        }
    }
    rep.verdict = rep.reasons.empty() ? Verdict::SDC : Verdict::NOT_SDC;
    return rep;
}

}  // namespace sdc
