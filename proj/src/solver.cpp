#include "sdc/solver.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "sdc/eig.hpp"
#include "sdc/svd.hpp"

namespace sdc {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

DetectReport report_from_feasibility(const FeasibilityOutcome& feas) {
    DetectReport rep;
    rep.route = Route::SDP;
    if (feas.verdict == FeasibilityVerdict::PD_FOUND) {
        rep.verdict = Verdict::SDC;
    } else {
        rep.verdict = Verdict::NOT_SDC;
        if (feas.best_min_eig == -std::numeric_limits<double>::infinity())
            rep.reasons.push_back({DetectReason::Kind::TrivialSolutionSpace, -1, -1,
                                   "the constraint operator has only the trivial kernel"});
        else
            rep.reasons.push_back({DetectReason::Kind::NoPdFound, -1, -1,
                                   "best min eigenvalue reached " +
                                       std::to_string(feas.best_min_eig)});
    }
    return rep;
}

// m = 1: plain eigendecomposition already solves the problem
SolveOutcome solve_single(const MatrixFamily& f, const Tolerances& tol) {
    SolveOutcome out;
    const EigResult e = hermitian_eig(f[0], tol);
    out.verdict = Verdict::SDC;
    out.detect.verdict = Verdict::SDC;
    out.detect.route = Route::SDP;
    out.feasibility.verdict = FeasibilityVerdict::PD_FOUND;
    out.feasibility.x = HermitianMatrix::wrap(Matrix::identity(f.n()));
    out.feasibility.best_min_eig = 1.0;
    CongruenceResult res;
    res.transform = e.u;
    res.diagonals = {e.lam};
    res.backward_error = backward_error(f, e.u);
    out.result = std::move(res);
    return out;
}

}  // namespace

SolveOutcome solve(const MatrixFamily& f, const Tolerances& tol, Route route) {
    tol.validate();
    const auto t0 = std::chrono::steady_clock::now();
    if (f.m() == 1) {
        SolveOutcome out = solve_single(f, tol);
        out.timings.total_s = seconds_since(t0);
        return out;
    }

    SolveOutcome out;
    const auto t_detect = std::chrono::steady_clock::now();
    std::optional<DetectReport> pencil_rep;
    try {
        if (route == Route::PENCIL || route == Route::BOTH)
            pencil_rep = detect_via_pencil(f, tol);
        // the SDP stage also produces the X every SDC construction needs
        out.feasibility = sdp_detect(f, tol);
    } catch (const VerdictConflictError&) {
        throw;
    } catch (const Error& e) {
        throw Error(std::string("detect stage: ") + e.what());
    }
    const DetectReport sdp_rep = report_from_feasibility(out.feasibility);
    out.timings.detect_s = seconds_since(t_detect);

    if (pencil_rep && pencil_rep->verdict != sdp_rep.verdict) {
        if (route == Route::BOTH)
            throw VerdictConflictError(
                "pencil says " +
                std::string(pencil_rep->verdict == Verdict::SDC ? "SDC" : "NOT_SDC") +
                ", SDP feasibility says " +
                (sdp_rep.verdict == Verdict::SDC ? "SDC" : "NOT_SDC"));
        // route == PENCIL: the pencil verdict stands, but without a PD solution
        // no transform can be built
        if (pencil_rep->verdict == Verdict::SDC)
            throw VerdictConflictError(
                "pencil route found the family SDC but no PD solution emerged to build the "
                "transform");
    }
    out.detect = route == Route::SDP ? sdp_rep : *pencil_rep;
    if (route == Route::BOTH) out.detect.route = Route::BOTH;
    out.verdict = out.detect.verdict;
    if (out.verdict == Verdict::NOT_SDC) {
        out.timings.total_s = seconds_since(t0);
        return out;
    }

    const auto t_sqrt = std::chrono::steady_clock::now();
    HermitianMatrix q;
    std::vector<HermitianMatrix> transformed;
    try {
        q = pd_sqrt(*out.feasibility.x, tol);
        transformed.reserve(f.m());
        for (const auto& c : f.members()) {
            Matrix t = q.mat() * c.mat() * q.mat();
            if (f.is_real()) t.clear_imag();
            transformed.push_back(HermitianMatrix::wrap(t));
        }
    } catch (const Error& e) {
        throw Error(std::string("square-root stage: ") + e.what());
    }
    out.timings.sqrt_s = seconds_since(t_sqrt);

    const auto t_jd = std::chrono::steady_clock::now();
    MatrixFamily commuting(transformed);
    JointDiagResult jd = joint_diagonalize(commuting, tol);
    out.timings.jointdiag_s = seconds_since(t_jd);

    Matrix u = q.mat() * jd.u;  // final transform: PD square root times the unitary
    if (f.is_real()) u.clear_imag();

    CongruenceResult res;
    res.diagonals.resize(f.m());
    double imag_residue = 0;
    for (int i = 0; i < f.m(); ++i) {
        const Matrix d = jd.u.adjoint() * transformed[i].mat() * jd.u;
        res.diagonals[i].resize(f.n());
        for (int k = 0; k < f.n(); ++k) {
            imag_residue = std::max(imag_residue, std::abs(d(k, k).imag()));
            res.diagonals[i][k] = d(k, k).real();
        }
    }
    if (imag_residue > 1e-8 * (1.0 + u.frobenius_norm()))
        throw ConvergenceError("diagonal imaginary residue " + std::to_string(imag_residue));
    // the congruence transform must stay comfortably nonsingular
    const SvdResult usvd = svd(u, tol);
    if (usvd.sigma.back() <= tol.rank_cutoff(f.n(), f.n()) * usvd.sigma.front())
        throw ConvergenceError("congruence transform is numerically singular");
    res.backward_error = backward_error(f, u);
    res.transform = std::move(u);
    out.jointdiag = std::move(jd);
    out.result = std::move(res);
    out.timings.total_s = seconds_since(t0);
    return out;
}

DetectReport detect(const MatrixFamily& f, const Tolerances& tol, Route route) {
    tol.validate();
    if (f.m() == 1) {
        DetectReport rep;
        rep.verdict = Verdict::SDC;
        rep.route = route;
        return rep;
    }
    std::optional<DetectReport> pencil_rep, sdp_rep;
    if (route == Route::PENCIL || route == Route::BOTH) pencil_rep = detect_via_pencil(f, tol);
    if (route == Route::SDP || route == Route::BOTH)
        sdp_rep = report_from_feasibility(sdp_detect(f, tol));
    if (route == Route::SDP) return *sdp_rep;
    if (route == Route::PENCIL) return *pencil_rep;
    if (pencil_rep->verdict != sdp_rep->verdict)
        throw VerdictConflictError(
            "pencil says " + std::string(pencil_rep->verdict == Verdict::SDC ? "SDC" : "NOT_SDC") +
            ", SDP feasibility says " + (sdp_rep->verdict == Verdict::SDC ? "SDC" : "NOT_SDC"));
    DetectReport rep = *pencil_rep;  // carries q, witness, max rank
    rep.route = Route::BOTH;
    for (const auto& r : sdp_rep->reasons) rep.reasons.push_back(r);
    return rep;
}

ConstructedFamily random_sdc_family(int n, int m, std::uint64_t seed, bool complex_entries) {
    if (n < 1 || m < 1) throw DimensionError("random_sdc_family needs n, m >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    ConstructedFamily out;
    // redraw P until comfortably nonsingular (deterministic given the seed)
    for (int attempt = 0; attempt < 64; ++attempt) {
        Matrix p(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                p(i, j) = complex_entries ? cplx(unif(rng), unif(rng)) : cplx(unif(rng), 0.0);
        if (n > 1) {
            const SvdResult s = svd(p);
            if (s.sigma.back() <= 3e-3 * s.sigma.front()) continue;
        } else if (std::abs(p(0, 0)) < 1e-4) {
            continue;
        }
        out.p = std::move(p);
        break;
    }
    if (out.p.rows() == 0) throw ConvergenceError("random_sdc_family: no well-conditioned P");
    std::vector<HermitianMatrix> members;
    out.diagonals.resize(m);
    for (int i = 0; i < m; ++i) {
        out.diagonals[i].resize(n);
        for (int k = 0; k < n; ++k) out.diagonals[i][k] = unif(rng);
        Matrix c = out.p.adjoint() * Matrix::diagonal(out.diagonals[i]) * out.p;
        if (!complex_entries) c.clear_imag();
        members.push_back(HermitianMatrix::wrap(c));
    }
    out.family = MatrixFamily(std::move(members));
    return out;
}

}  // namespace sdc
