// Acceptance suite: one pass/fail line per criterion.  Exit code 0 only when
// every criterion holds.

#include <chrono>
#include <cstdio>
#include <random>

#include "sdc/io.hpp"
#include "sdc/solver.hpp"
#include "sdc/svd.hpp"
#include "sdc/eig.hpp"
#include "testutil.hpp"

using namespace sdc;
using namespace sdc::test;

namespace {

int failures = 0;

struct Criterion {
    const char* name;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;

    explicit Criterion(const char* n) : name(n) {}
    void expect(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        } else if (!cond) {
            detail += "; " + what;
        }
    }
    ~Criterion() {
        const double dt =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] %s (%.2f s)%s%s\n", ok ? "PASS" : "FAIL", name, dt,
                    detail.empty() ? "" : " - ", detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
};

MatrixFamily random_int_family(int n, int m, std::mt19937_64& rng, bool complex_entries) {
    std::uniform_int_distribution<int> coeff(-3, 3);
    std::vector<HermitianMatrix> members;
    for (int k = 0; k < m; ++k) {
        Matrix a(n, n);
        for (int i = 0; i < n; ++i) {
            a(i, i) = coeff(rng);
            for (int j = i + 1; j < n; ++j) {
                const cplx z = complex_entries ? cplx(coeff(rng), coeff(rng)) : cplx(coeff(rng), 0);
                a(i, j) = z;
                a(j, i) = std::conj(z);
            }
        }
        members.push_back(HermitianMatrix::wrap(a));
    }
    return MatrixFamily(std::move(members));
}

bool diagonals_match_projectively(const std::vector<std::vector<double>>& got,
                                  const std::vector<std::vector<double>>& want, double rel) {
    const int m = static_cast<int>(got.size());
    const int n = static_cast<int>(got[0].size());
    std::vector<bool> used(n, false);
    for (int j = 0; j < n; ++j) {
        bool matched = false;
        for (int k = 0; k < n && !matched; ++k) {
            if (used[k]) continue;
            int imax = 0;
            double best = 0;
            for (int i = 0; i < m; ++i)
                if (std::abs(want[i][k]) > best) { best = std::abs(want[i][k]); imax = i; }
            if (best == 0) continue;
            const double s = got[imax][j] / want[imax][k];
            if (s <= 0) continue;
            bool all_ok = true;
            for (int i = 0; i < m; ++i)
                if (std::abs(got[i][j] - s * want[i][k]) > rel * (1.0 + std::abs(s) * best))
                    all_ok = false;
            if (all_ok) {
                used[k] = true;
                matched = true;
            }
        }
        if (!matched) return false;
    }
    return true;
}

// ---- criterion 1: example corpus classification, both routes, < 1 s -------
void criterion1() {
    Criterion c("criterion 1: example corpus classification (both routes agree)");
    const auto t0 = std::chrono::steady_clock::now();
    struct Case {
        const char* name;
        MatrixFamily family;
        Verdict expected;
    };
    const std::vector<Case> cases = {
        {"2x2 pair", example_pair_not_sdc(), Verdict::NOT_SDC},
        {"SDC triple", example_sdc_triple(), Verdict::SDC},
        {"singular triple", example_singular_not_sdc(), Verdict::NOT_SDC},
        {"shared-kernel triple", example_shared_kernel(), Verdict::NOT_SDC},
        {"noncommuting SDC triple", example_noncommuting_sdc(), Verdict::SDC},
    };
    for (const auto& k : cases) {
        try {
            const DetectReport both = detect(k.family, Tolerances{}, Route::BOTH);
            c.expect(both.verdict == k.expected, std::string(k.name) + ": wrong verdict");
        } catch (const VerdictConflictError& e) {
            c.expect(false, std::string(k.name) + ": " + e.what());
        }
    }
    // singular triple: pencil route must exhibit the max-rank witness r = 3
    const DetectReport sing = detect_via_pencil(example_singular_not_sdc());
    c.expect(sing.max_rank == 3 && sing.witness.has_value(),
             "singular triple witness/max rank mismatch");
    // shared-kernel triple: q = 1
    const DetectReport shared = detect_via_pencil(example_shared_kernel());
    c.expect(shared.q == 1, "shared-kernel triple q != 1");
    // 3.2 example 3 family under the SDP route: trivial solution space
    const MatrixFamily f3 = example_singular_not_sdc();
    const AffineSolutionSpace s3 = solution_space(build_system(f3), f3);
    c.expect(s3.dim() == 0, "singular triple solution space not trivial");
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.expect(dt < 1.0, "corpus classification exceeded 1 s");
}

// ---- criterion 2: benchmark backward errors ------------------------------
void criterion2() {
    Criterion c("criterion 2: benchmark backward errors at (3,3) and (10,20)");
    const struct {
        int m, n;
        double bound;
    } rows[] = {{3, 3, 3.33e-11}, {10, 20, 8.64e-12}};
    for (const auto& row : rows) {
        double err_sum = 0, time_sum = 0;
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            const ConstructedFamily fam = random_sdc_family(row.n, row.m, seed);
            const auto t0 = std::chrono::steady_clock::now();
            const SolveOutcome out = solve(fam.family);
            time_sum +=
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (out.verdict != Verdict::SDC) {
                c.expect(false, "constructed family not recognized as SDC");
                return;
            }
            err_sum += out.result->backward_error;
        }
        const double avg = err_sum / 3;
        std::printf("  (m=%d, n=%d): Err %.3e (bound %.3e), %.2f s/run\n", row.m, row.n, avg,
                    row.bound, time_sum / 3);
        c.expect(avg <= row.bound, "average backward error above the bound");
    }
}

// ---- criterion 3: Schmuedgen identity suite ------------------------------
void criterion3() {
    Criterion c("criterion 3: Schmuedgen identity suite, d formulas, pivot divisibility");
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> u(-1.0, 1.0);

    std::vector<PolyMatrix> pencils;
    for (int rep = 0; rep < 50; ++rep) {
        const int n = 2 + rep % 5;             // 2..6
        const int m = 1 + rep % 4;             // 1..4
        pencils.push_back(pencil_from_family(random_int_family(n, m, rng, rep % 5 == 0)));
    }
    pencils.push_back(pencil_from_family(example_singular_not_sdc()));
    pencils.push_back(pencil_from_family(example_shared_kernel()));

    for (size_t idx = 0; idx < pencils.size(); ++idx) {
        const PolyMatrix& pencil = pencils[idx];
        SchmudgenTrace trace;
        try {
            trace = schmudgen_run(pencil);
        } catch (const Error& e) {
            c.expect(false, std::string("run failed: ") + e.what());
            continue;
        }
        const int n = trace.n;
        for (int p = 0; p < 20; ++p) {
            std::vector<double> pt(trace.nvars);
            for (auto& x : pt) x = u(rng);
            // the evaluated scales grow like |lambda|^(3^k); nudge the point
            // until every quantity (including X+/b^2) sits in range
            Matrix cc, xm, xp, w;
            std::vector<cplx> d(n);
            cplx b = 0;
            bool usable = false;
            for (int shrink = 0; shrink < 400 && !usable; ++shrink) {
                cc = pencil.eval(pt);
                xm = trace.xminus_eval(pt);
                xp = trace.xplus_eval(pt);
                for (int j = 0; j < n; ++j) d[j] = trace.ds[j].eval(pt);
                b = trace.b.eval(pt);
                // keep every factor below 1e80 so the triple products stay
                // far from the overflow boundary
                usable = cc.all_finite() && xm.all_finite() && xm.max_abs() < 1e80 &&
                         xp.all_finite() && xp.max_abs() < 1e80 && is_finite(b) &&
                         std::abs(b) < 1e80;
                for (int j = 0; j < n; ++j)
                    usable = usable && is_finite(d[j]) && std::abs(d[j]) < 1e160;
                if (usable && std::abs(b) > 0 && std::isfinite(1.0 / abs2(b))) {
                    w = xp * (1.0 / (b * b));
                    usable = w.all_finite() && w.max_abs() < 1e80;
                } else {
                    usable = false;
                }
                if (!usable)
                    for (auto& x : pt) x *= 0.85;
            }
            if (!usable) continue;  // degenerate direction; other points cover it
            const Matrix dd = Matrix::diagonal(d);
            const double s8c =
                std::max(1.0, xm.frobenius_norm() * xm.frobenius_norm() * cc.frobenius_norm());
            c.expect((xm * cc * xm.adjoint() - dd).frobenius_norm() <= 1e-8 * s8c,
                     "X- C X-* = diag(d) failed (pencil " + std::to_string(idx) + ", rel " +
                         std::to_string((xm * cc * xm.adjoint() - dd).frobenius_norm() / s8c) + ")");
            const double s8a = std::max(1.0, xp.frobenius_norm() * xm.frobenius_norm());
            c.expect((xp * xm - Matrix::identity(n) * (b * b)).frobenius_norm() <= 1e-8 * s8a,
                     "X+ X- = b^2 I failed (pencil " + std::to_string(idx) + ")");
            // b^4 C = X+ D X+* checked as C = (X+/b^2) D (X+/b^2)* so that the
            // degree-4k powers cannot overflow
            const Matrix rhs = w * dd * w.adjoint();
            const double s8b =
                std::max(1.0, cc.frobenius_norm() +
                                  w.frobenius_norm() * w.frobenius_norm() * dd.frobenius_norm());
            c.expect((cc - rhs).frobenius_norm() <= 1e-8 * s8b,
                     "b^4 C = X+ D X+* failed (pencil " + std::to_string(idx) + ")");
        }
        // d_j = alpha_j^3 prod alpha_t^2.  The check is exact while
        // every coefficient fits the 2^53 integer range of a double; beyond
        // that the identity is verified over the shared factor basis (an
        // exact statement in C[lambda]) plus factored evaluations.
        for (int j = 0; j < trace.steps; ++j) {
            // predict whether the expanded product stays in the exact range
            double log_bound = 0.0;
            for (int t = j; t < trace.steps; ++t)
                log_bound += (t == j ? 3 : 2) * std::log10(std::max(
                                                   1.0, trace.alphas[t].max_abs_coeff() *
                                                            trace.alphas[t].term_count()));
            if (log_bound < 15.5 && trace.ds[j].degree() <= 100) {
                MultiPoly expect = trace.alphas[j] * trace.alphas[j] * trace.alphas[j];
                for (int t = j + 1; t < trace.steps; ++t)
                    expect = expect * trace.alphas[t] * trace.alphas[t];
                const MultiPoly got = trace.ds[j].expand();
                c.expect((got - expect).is_zero(0.0), "d formula expansion mismatch");
            } else {
                std::vector<int> want(trace.factor_table->size(), 0);
                for (int t = j; t < trace.steps; ++t) {
                    const auto& ae = trace.alphas_factored[t].factor_exponents();
                    for (size_t i = 0; i < ae.size(); ++i) want[i] += (t == j ? 3 : 2) * ae[i];
                }
                c.expect(trace.ds[j].factor_exponents() == want &&
                             trace.ds[j].tail().term_count() == 1,
                         "d formula factor mismatch");
                for (int p = 0; p < 40; ++p) {
                    std::vector<double> pt(trace.nvars);
                    for (auto& x : pt) x = u(rng);
                    cplx ev = 1.0;
                    for (int t = j; t < trace.steps; ++t) {
                        const cplx a = trace.alphas_factored[t].eval(pt);
                        ev *= (t == j) ? a * a * a : a * a;
                    }
                    const cplx got = trace.ds[j].eval(pt);
                    c.expect(std::abs(got - ev) <= 1e-10 * std::max(1.0, std::abs(ev)),
                             "d formula evaluation mismatch");
                }
            }
        }
        // divisibility with zero polynomial remainder.  The quotient is
        // reconstructed over the factor basis and verified by an exact
        // product: alpha_t q = alpha_{t+1} proves zero remainder (division
        // is unique over C[lambda]).  Plain long division cannot be used at
        // scale: legitimate leading coefficients can sit far below the
        // roundoff of the largest ones.
        for (int t = 0; t + 1 < trace.steps; ++t) {
            const auto& ea = trace.alphas_factored[t].factor_exponents();
            const auto& eb = trace.alphas_factored[t + 1].factor_exponents();
            std::vector<int> qexp(eb.size(), 0);
            bool divides = true;
            for (size_t i = 0; i < eb.size(); ++i) {
                const int low = i < ea.size() ? ea[i] : 0;
                if (low > eb[i]) divides = false;
                else qexp[i] = eb[i] - low;
            }
            if (!divides) {
                c.expect(false, "alpha_t does not divide alpha_{t+1} (pencil " +
                                    std::to_string(idx) + ", t " + std::to_string(t) + ")");
                continue;
            }
            const double big = std::max(trace.alphas[t].max_abs_coeff(),
                                        trace.alphas[t + 1].max_abs_coeff());
            if (big < 9.0e15) {
                const MultiPoly q =
                    FactoredPoly(trace.factor_table, qexp,
                                 MultiPoly::constant(trace.nvars, 1.0))
                        .expand();
                const MultiPoly resid = trace.alphas[t] * q - trace.alphas[t + 1];
                c.expect(resid.is_zero(1e-12 * std::max(1.0, big)),
                         "nonzero division remainder (pencil " + std::to_string(idx) + ")");
            } else {
                for (int p = 0; p < 20; ++p) {
                    std::vector<double> pt(trace.nvars);
                    for (auto& x : pt) x = 0.3 * u(rng);
                    const cplx va = trace.alphas_factored[t].eval(pt);
                    const cplx vb = trace.alphas_factored[t + 1].eval(pt);
                    const cplx vq = FactoredPoly(trace.factor_table, qexp,
                                                 MultiPoly::constant(trace.nvars, 1.0))
                                        .eval(pt);
                    c.expect(std::abs(va * vq - vb) <= 1e-10 * std::max(1.0, std::abs(vb)),
                             "division remainder at evaluation (pencil " + std::to_string(idx) +
                                 ")");
                }
            }
        }
    }
}

// ---- criterion 4: oracle equivalence on constructed families -------------
void criterion4() {
    Criterion c("criterion 4: 200 constructed SDC families solved and matched");
    std::mt19937_64 rng(77);
    for (int rep = 0; rep < 200; ++rep) {
        const int n = 2 + static_cast<int>(rng() % 11);  // 2..12
        const int m = 2 + static_cast<int>(rng() % 5);   // 2..6
        const bool complex_entries = rep % 2 == 1;
        const ConstructedFamily fam = random_sdc_family(n, m, 10000 + rep, complex_entries);
        SolveOutcome out;
        try {
            out = solve(fam.family);
        } catch (const Error& e) {
            c.expect(false, std::string("solve threw: ") + e.what());
            continue;
        }
        if (out.verdict != Verdict::SDC) {
            c.expect(false, "constructed family " + std::to_string(rep) + " not SDC");
            continue;
        }
        c.expect(out.result->backward_error <= 1e-8, "backward error above 1e-8");
        const Matrix& u = out.result->transform;
        bool residual_ok = true;
        for (int i = 0; i < m; ++i) {
            Matrix t = u.adjoint() * fam.family[i].mat() * u;
            for (int k = 0; k < n; ++k) t(k, k) = 0;
            const double unorm = u.frobenius_norm();
            if (t.frobenius_norm() >
                1e-8 * fam.family[i].frobenius_norm() * (1.0 + unorm * unorm))
                residual_ok = false;
        }
        c.expect(residual_ok, "diagonalization residual above tolerance");
        c.expect(diagonals_match_projectively(out.result->diagonals, fam.diagonals, 1e-6),
                 "diagonals do not match the ground truth");
    }
}

// ---- criterion 5: Jacobi module properties -------------------------------
void criterion5() {
    Criterion c("criterion 5: Jacobi monotonicity, unitarity, rotation bookkeeping");
    std::mt19937_64 rng(55);
    // monotone histories and unitarity across commuting families
    for (int rep = 0; rep < 25; ++rep) {
        const int n = 2 + static_cast<int>(rng() % 9);
        const int m = 1 + static_cast<int>(rng() % 5);
        const MatrixFamily f = random_commuting_family(n, m, rng, rep % 2 == 0);
        const JointDiagResult jd = joint_diagonalize(f);
        for (size_t k = 1; k < jd.off2_history.size(); ++k)
            c.expect(jd.off2_history[k] <= jd.off2_history[k - 1], "off2 increased");
        c.expect((jd.u.adjoint() * jd.u - Matrix::identity(n)).frobenius_norm() <= 1e-12 * n,
                 "U unitarity residual too large");
        c.expect(jd.converged, "Jacobi failed to converge on a commuting family");
    }
    // off2 update identity on 1000 random rotation applications
    std::uniform_real_distribution<double> uang(-0.785, 0.785), uphi(-3.14159, 3.14159),
        uval(-1.0, 1.0);
    for (int rep = 0; rep < 1000; ++rep) {
        const int n = 2 + static_cast<int>(rng() % 5);
        const int m = 1 + static_cast<int>(rng() % 4);
        std::vector<Matrix> mats;
        for (int i = 0; i < m; ++i) mats.push_back(random_hermitian(n, rng).mat());
        const int uu = static_cast<int>(rng() % (n - 1));
        const int vv = uu + 1 + static_cast<int>(rng() % (n - uu - 1));
        const double theta = uang(rng), phi = uphi(rng);
        const double cc = std::cos(theta);
        const cplx ss = std::polar(std::sin(theta), phi);
        const Matrix muv = build_Muv(mats, uu, vv);
        double contrib = 0;
        for (const auto& a : mats) contrib += abs2(a(uu, vv)) + abs2(a(vv, uu));
        const double predicted = off2(mats) - contrib + muv_objective(muv, theta, phi);
        Matrix r = Matrix::identity(n);
        r(uu, uu) = cc;
        r(uu, vv) = -std::conj(ss);
        r(vv, uu) = ss;
        r(vv, vv) = cc;
        std::vector<Matrix> rotated;
        for (const auto& a : mats) rotated.push_back(r * a * r.adjoint());
        const double actual = off2(rotated);
        c.expect(std::abs(actual - predicted) <= 1e-10 * std::max(1.0, actual),
                 "off2 update identity violated");
    }
}

// ---- criterion 6: realness -----------------------------------------------
void criterion6() {
    Criterion c("criterion 6: real inputs produce bitwise-zero imaginary parts");
    std::mt19937_64 rng(66);
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 2 + rep % 6;
        const int m = 2 + rep % 3;
        const ConstructedFamily fam = random_sdc_family(n, m, 20000 + rep);
        const SolveOutcome out = solve(fam.family);
        if (out.verdict != Verdict::SDC) {
            c.expect(false, "real constructed family not SDC");
            continue;
        }
        c.expect(out.result->transform.max_imag_abs() == 0.0, "transform has imaginary residue");
        c.expect(out.feasibility.x->mat().max_imag_abs() == 0.0, "X has imaginary residue");
        if (out.jointdiag)
            c.expect(out.jointdiag->u.max_imag_abs() == 0.0, "U has imaginary residue");
    }
    for (const auto& f : {example_sdc_triple(), example_shared_kernel()}) {
        const EigResult e = hermitian_eig(f[0]);
        c.expect(e.u.max_imag_abs() == 0.0, "eigendecomposition imaginary residue");
        const KernelResult k = common_kernel(f);
        c.expect(k.basis.max_imag_abs() == 0.0 && k.range.max_imag_abs() == 0.0,
                 "kernel basis imaginary residue");
        const SvdResult s = svd(stack_family(f));
        c.expect(s.u.max_imag_abs() == 0.0 && s.v.max_imag_abs() == 0.0,
                 "svd factors imaginary residue");
    }
}

// ---- criterion 7: negative controls --------------------------------------
void criterion7() {
    Criterion c("criterion 7: rank-one perturbations flip the verdict (>= 95%)");
    int flips = 0;
    const int trials = 200;
    for (int rep = 0; rep < trials; ++rep) {
        const int n = 2 + rep % 7;  // 2..8
        // m >= 3: generic pairs remain SDC, so rank-one noise cannot flip them
        const int m = 3 + rep % 2;  // 3..4
        const ConstructedFamily fam = random_sdc_family(n, m, 30000 + rep);
        std::mt19937_64 rng(40000 + rep);
        Matrix v = random_real(n, 1, rng);
        Matrix vv(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) vv(i, j) = v(i, 0) * v(j, 0);
        const Matrix c0 = fam.family[0].mat();
        vv *= cplx(0.1 * c0.frobenius_norm() / vv.frobenius_norm(), 0);
        std::vector<HermitianMatrix> members{HermitianMatrix::wrap(c0 + vv)};
        for (int i = 1; i < m; ++i) members.push_back(fam.family[i]);
        try {
            if (solve(MatrixFamily(members)).verdict == Verdict::NOT_SDC) ++flips;
        } catch (const Error&) {
            // numerical failures count as non-flips and are logged, not fatal
        }
    }
    std::printf("  flip rate: %d/%d\n", flips, trials);
    c.expect(flips * 100 >= trials * 95, "flip rate below 95%");
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    if (failures == 0) std::printf("acceptance: all criteria PASS\n");
    else std::printf("acceptance: %d criteria FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}
