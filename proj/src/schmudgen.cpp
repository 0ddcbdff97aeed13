#include "sdc/schmudgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "sdc/svd.hpp"

namespace sdc {

void apply_move(PolyMatrix& pm, const ElementaryMove& op) {
    const int n = pm.rows();
    if (op.kind == ElementaryMove::Kind::Swap) {
        for (int c = 0; c < n; ++c) std::swap(pm(op.i, c), pm(op.j, c));
        for (int r = 0; r < n; ++r) std::swap(pm(r, op.i), pm(r, op.j));
        return;
    }
    const cplx w = op.kind == ElementaryMove::Kind::AddRow ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
    for (int c = 0; c < n; ++c) pm(op.i, c) = pm(op.i, c) + pm(op.j, c) * w;
    for (int r = 0; r < n; ++r) pm(r, op.i) = pm(r, op.i) + pm(r, op.j) * std::conj(w);
}

PolyMatrix fix_matrix(const PivotFix& fix, int n, int offset, int nvars, bool inverse) {
    PolyMatrix e = PolyMatrix::identity(n, nvars);
    auto apply_left = [&](const ElementaryMove& op, cplx w) {
        // e <- E_op * e
        if (op.kind == ElementaryMove::Kind::Swap) {
            for (int c = 0; c < n; ++c) std::swap(e(offset + op.i, c), e(offset + op.j, c));
        } else {
            for (int c = 0; c < n; ++c)
                e(offset + op.i, c) = e(offset + op.i, c) + e(offset + op.j, c) * w;
        }
    };
    if (!inverse) {
        for (const auto& op : fix.ops)
            apply_left(op, op.kind == ElementaryMove::Kind::AddRowTimesI ? cplx(0, 1) : cplx(1, 0));
    } else {
        for (auto it = fix.ops.rbegin(); it != fix.ops.rend(); ++it)
            apply_left(*it, it->kind == ElementaryMove::Kind::AddRowTimesI ? cplx(0, -1) : cplx(-1, 0));
    }
    return e;
}

namespace {

std::vector<ElementaryMove> find_pivot_fix(const PolyMatrix& pm, double coeff_tol) {
    const int n = pm.rows();
    if (!pm(0, 0).is_zero(coeff_tol)) return {};
    for (int j = 1; j < n; ++j)
        if (!pm(j, j).is_zero(coeff_tol)) return {{ElementaryMove::Kind::Swap, 0, j}};
    // whole diagonal vanishes: locate any nonzero entry, bring it onto row 0
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (pm(i, j).is_zero(coeff_tol)) continue;
            std::vector<ElementaryMove> ops;
            int col = j;
            if (i != 0) ops.push_back({ElementaryMove::Kind::Swap, 0, i});
            MultiPoly p = pm(i, j);
            if (!p.real_part().is_zero(coeff_tol))
                ops.push_back({ElementaryMove::Kind::AddRow, 0, col});
            else
                ops.push_back({ElementaryMove::Kind::AddRowTimesI, 0, col});
            return ops;
        }
    }
    throw IdenticallyZeroError();
}

}  // namespace

std::pair<PolyMatrix, PivotFix> ensure_nonzero_pivot(const PolyMatrix& pm, double coeff_tol) {
    if (pm.rows() != pm.cols()) throw DimensionError("ensure_nonzero_pivot");
    PivotFix fix;
    fix.ops = find_pivot_fix(pm, coeff_tol);
    PolyMatrix out = pm;
    for (const auto& op : fix.ops) apply_move(out, op);
    return {std::move(out), std::move(fix)};
}

FactoredPoly::FactoredPoly(std::shared_ptr<const std::vector<MultiPoly>> table,
                           std::vector<int> exps, MultiPoly tail)
    : table_(std::move(table)), exps_(std::move(exps)), tail_(std::move(tail)) {}

int FactoredPoly::degree() const {
    if (tail_.is_zero()) return -1;
    int d = tail_.degree();
    if (table_)
        for (size_t i = 0; i < exps_.size(); ++i)
            if (exps_[i] > 0) d += exps_[i] * (*table_)[i].degree();
    return d;
}

cplx FactoredPoly::eval(std::span<const double> point) const {
    cplx v = tail_.eval(point);
    if (table_) {
        for (size_t i = 0; i < exps_.size(); ++i) {
            if (exps_[i] == 0) continue;
            cplx base = (*table_)[i].eval(point);
            cplx p = 1.0;
            int e = exps_[i];
            while (e > 0) {  // binary exponentiation
                if (e & 1) p *= base;
                base *= base;
                e >>= 1;
            }
            v *= p;
        }
    }
    return v;
}

MultiPoly FactoredPoly::expand() const {
    MultiPoly acc = tail_;
    if (table_) {
        // ascending factor degree keeps the partial products small for longer
        for (size_t i = 0; i < exps_.size(); ++i)
            for (int e = 0; e < exps_[i]; ++e) acc = acc * (*table_)[i];
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Schmuedgen chain.
//
// The textbook update is C_k = alpha_k (alpha_k Chat_k - beta_k* beta_k) with
// alpha_k = C_{k-1}(1,1).  Writing C_k = u_k B_k where B_k carries the
// bordered minors of the (pivot-fixed) pencil, Sylvester's identity gives
//   B_k(i,j) = (B(1,1) B(i+1,j+1) - B(i+1,1) B(1,j+1)) / m_{k-1},
//   u_k = u_{k-1}^3 m_k m_{k-1},   alpha_k = u_{k-1} m_k,
// with m_k = B_{k-1}(1,1).  Division is exact over C[lambda], so the chain
// reproduces the textbook polynomials while only ever multiplying
// low-degree factors.
// ---------------------------------------------------------------------------

struct SchmudgenState::Impl {
    int n = 0, nvars = 0;
    double c0 = 0;  // max input coefficient magnitude
    PolyMatrix pencil;
    std::shared_ptr<std::vector<MultiPoly>> minors = std::make_shared<std::vector<MultiPoly>>();
    std::vector<int> uexp;
    MultiPoly u_expanded;
    bool u_dirty = false;
    PolyMatrix B;
    int steps = 0;
    std::vector<MultiPoly> alphas;
    std::vector<std::vector<int>> alpha_exps;
    std::vector<std::vector<int>> d_exps;
    std::vector<PivotFix> moves;
    std::vector<ScaledPolyMatrix> xm, xp;

    double ztol(int entry_degree) const {
        double growth = 1.0;
        for (int i = 2; i <= entry_degree + 1; ++i) growth *= i;
        return 1e-12 * growth * std::pow(std::max(1.0, c0), entry_degree);
    }

    void refresh_u() {
        if (!u_dirty) return;
        MultiPoly acc = MultiPoly::constant(nvars, 1.0);
        for (size_t i = 0; i < uexp.size(); ++i)
            for (int e = 0; e < uexp[i]; ++e) acc = acc * (*minors)[i];
        u_expanded = std::move(acc);
        u_dirty = false;
    }
};

SchmudgenState::SchmudgenState(const PolyMatrix& pencil) : impl_(std::make_shared<Impl>()) {
    if (pencil.rows() != pencil.cols()) throw DimensionError("schmudgen pencil");
    const double herm_slack = 1e-9 * std::max(1.0, pencil.max_abs_coeff());
    if (!pencil.is_hermitian(herm_slack)) throw Error("schmudgen: pencil is not Hermitian");
    impl_->n = pencil.rows();
    impl_->nvars = pencil.nvars();
    impl_->pencil = pencil;
    impl_->B = pencil;
    impl_->c0 = pencil.max_abs_coeff();
    impl_->u_expanded = MultiPoly::constant(impl_->nvars, 1.0);
}

double SchmudgenState::zero_tol() const { return impl_->ztol(impl_->steps + 1); }

int SchmudgenState::block_size() const { return impl_->B.rows(); }

bool SchmudgenState::finished() const {
    return impl_->B.rows() <= 1 || impl_->B.is_diagonal(zero_tol());
}

PolyMatrix SchmudgenState::current() const {
    impl_->refresh_u();
    return impl_->B.scaled(impl_->u_expanded);
}

void SchmudgenState::fix_pivot() {
    Impl& s = *impl_;
    auto ops = find_pivot_fix(s.B, zero_tol());
    if (ops.empty()) return;
    PivotFix fix{s.steps, std::move(ops)};
    for (const auto& op : fix.ops) apply_move(s.B, op);
    const FactoredPoly one(nullptr, {}, MultiPoly::constant(s.nvars, 1.0));
    s.xm.push_back({one, fix_matrix(fix, s.n, s.steps, s.nvars, false)});
    s.xp.push_back({one, fix_matrix(fix, s.n, s.steps, s.nvars, true)});
    s.moves.push_back(std::move(fix));
}

void SchmudgenState::step() {
    Impl& s = *impl_;
    const int nb = s.B.rows();
    if (nb <= 1) throw Error("schmudgen_step: block already diagonal");
    const double zt = zero_tol();
    if (s.B(0, 0).is_zero(zt)) throw ZeroPivotError();

    const MultiPoly mk = s.B(0, 0);
    s.minors->push_back(mk);
    s.refresh_u();

    MultiPoly alpha = s.u_expanded * mk;
    std::vector<int> aexp = s.uexp;
    aexp.resize(s.minors->size(), 0);
    aexp[s.steps] += 1;
    s.alphas.push_back(std::move(alpha));
    s.alpha_exps.push_back(aexp);

    // diagonal bookkeeping: d_j *= alpha_k^2, then d_k = alpha_k^3
    for (auto& de : s.d_exps) {
        de.resize(s.minors->size(), 0);
        for (size_t i = 0; i < aexp.size(); ++i) de[i] += 2 * aexp[i];
    }
    std::vector<int> dk(aexp.size());
    for (size_t i = 0; i < aexp.size(); ++i) dk[i] = 3 * aexp[i];
    s.d_exps.push_back(std::move(dk));

    // X-/X+ factors for this step: alpha_k I with the -beta*/+beta* column is
    // u_{k-1} times a small-coefficient matrix, so it is stored factored
    PolyMatrix l(s.n, s.n, s.nvars), r(s.n, s.n, s.nvars);
    for (int i = 0; i < s.n; ++i) {
        l(i, i) = mk;
        r(i, i) = mk;
    }
    for (int j = 0; j + 1 < nb; ++j) {
        const MultiPoly bc = s.B(0, j + 1).conj_coeffs();
        l(s.steps + 1 + j, s.steps) = -bc;
        r(s.steps + 1 + j, s.steps) = bc;
    }
    std::vector<int> scale_exp = s.uexp;  // u_{k-1}
    scale_exp.resize(s.minors->size(), 0);
    const FactoredPoly uscale(s.minors, std::move(scale_exp),
                              MultiPoly::constant(s.nvars, 1.0));
    s.xm.push_back({uscale, std::move(l)});
    s.xp.push_back({uscale, std::move(r)});

    // Sylvester update of the reduced block
    PolyMatrix nxt(nb - 1, nb - 1, s.nvars);
    const MultiPoly* mprev = s.steps >= 1 ? &(*s.minors)[s.steps - 1] : nullptr;
    for (int i = 0; i + 1 < nb; ++i) {
        for (int j = i; j + 1 < nb; ++j) {
            MultiPoly num = mk * s.B(i + 1, j + 1) - s.B(i + 1, 0) * s.B(0, j + 1);
            if (mprev) {
                // a too-generous noise threshold can swallow genuinely small
                // leading coefficients, so retry with tighter ones
                std::optional<MultiPoly> q;
                for (double dt : {1e-10 * std::max(1.0, num.max_abs_coeff()),
                                  1e-13 * std::max(1.0, num.max_abs_coeff()), 0.0}) {
                    q = num.divide_exact(*mprev, dt);
                    if (q) break;
                }
                if (!q)
                    throw Error("schmudgen: exact division by the previous pivot failed; "
                                "coefficient collapse beyond the snap tolerance");
                nxt(i, j) = std::move(*q);
            } else {
                nxt(i, j) = std::move(num);
            }
            if (j != i) nxt(j, i) = nxt(i, j).conj_coeffs();
        }
    }
    s.B = std::move(nxt);

    // u_{k} = u_{k-1}^3 m_k m_{k-1}
    for (auto& e : s.uexp) e *= 3;
    s.uexp.resize(s.minors->size(), 0);
    s.uexp[s.steps] += 1;
    if (s.steps >= 1) s.uexp[s.steps - 1] += 1;
    s.u_dirty = true;
    s.steps += 1;
}

SchmudgenTrace SchmudgenState::finish() {
    Impl& s = *impl_;
    if (!finished()) throw Error("schmudgen finish: block is not diagonal yet");
    SchmudgenTrace t;
    t.n = s.n;
    t.nvars = s.nvars;
    t.steps = s.steps;
    t.pencil = s.pencil;
    t.alphas = s.alphas;
    t.pivot_moves = s.moves;
    t.coeff_zero_tol = s.ztol(s.steps + 1);
    std::shared_ptr<const std::vector<MultiPoly>> table = s.minors;
    t.factor_table = table;

    const MultiPoly one = MultiPoly::constant(s.nvars, 1.0);
    for (auto ae : s.alpha_exps) {
        ae.resize(s.minors->size(), 0);
        t.alphas_factored.emplace_back(table, std::move(ae), one);
    }
    for (auto de : s.d_exps) {
        de.resize(s.minors->size(), 0);
        t.ds.emplace_back(table, std::move(de), one);
        t.d_zero.push_back(false);
    }
    // trailing block entries become the remaining d's; identically-zero ones
    // are permuted last so the nonzero d's always lead
    const int nb = s.B.rows();
    const double zt = t.coeff_zero_tol;
    std::vector<int> order;
    for (int j = 0; j < nb; ++j)
        if (!s.B(j, j).is_zero(zt)) order.push_back(j);
    const int tail_nonzero = static_cast<int>(order.size());
    for (int j = 0; j < nb; ++j)
        if (s.B(j, j).is_zero(zt)) order.push_back(j);
    std::vector<int> ue = s.uexp;
    ue.resize(s.minors->size(), 0);
    for (int idx = 0; idx < nb; ++idx) {
        const int j = order[idx];
        t.ds.emplace_back(table, ue, s.B(j, j).pruned(zt));
        t.d_zero.push_back(idx >= tail_nonzero);
    }
    bool identity_perm = true;
    for (int idx = 0; idx < nb; ++idx) identity_perm = identity_perm && order[idx] == idx;
    t.xminus_factors = s.xm;
    t.xplus_factors = s.xp;
    if (!identity_perm) {
        PolyMatrix perm(s.n, s.n, s.nvars);
        for (int i = 0; i < s.steps; ++i) perm(i, i) = one;
        for (int idx = 0; idx < nb; ++idx) perm(s.steps + idx, s.steps + order[idx]) = one;
        const FactoredPoly unit(nullptr, {}, one);
        t.xminus_factors.push_back({unit, perm});
        t.xplus_factors.push_back({unit, perm.adjoint()});  // permutation inverse
    }

    std::vector<int> bexp(s.minors->size(), 0);
    for (const auto& ae : s.alpha_exps)
        for (size_t i = 0; i < ae.size(); ++i) bexp[i] += ae[i];
    t.b = FactoredPoly(table, std::move(bexp), one);
    return t;
}

Matrix ScaledPolyMatrix::eval(std::span<const double> point) const {
    Matrix m = mat.eval(point);
    return m * scale.eval(point);
}

PolyMatrix ScaledPolyMatrix::expand() const { return mat.scaled(scale.expand()); }

PolyMatrix SchmudgenTrace::xminus() const {
    PolyMatrix acc = PolyMatrix::identity(n, nvars);
    for (const auto& f : xminus_factors) acc = f.expand() * acc;
    return acc;
}

PolyMatrix SchmudgenTrace::xplus() const {
    PolyMatrix acc = PolyMatrix::identity(n, nvars);
    for (const auto& f : xplus_factors) acc = acc * f.expand();
    return acc;
}

Matrix SchmudgenTrace::xminus_eval(std::span<const double> point) const {
    Matrix acc = Matrix::identity(n);
    for (const auto& f : xminus_factors) acc = f.eval(point) * acc;
    return acc;
}

Matrix SchmudgenTrace::xplus_eval(std::span<const double> point) const {
    Matrix acc = Matrix::identity(n);
    for (const auto& f : xplus_factors) acc = acc * f.eval(point);
    return acc;
}

int SchmudgenTrace::max_rank() const {
    int r = 0;
    for (size_t j = 0; j < d_zero.size(); ++j)
        if (!d_zero[j]) ++r;
    return r;
}

SchmudgenTrace schmudgen_run(const PolyMatrix& pencil, const Tolerances& tol) {
    tol.validate();
    SchmudgenState st(pencil);
    int guard = 0;
    while (!st.finished()) {
        if (++guard > pencil.rows()) throw Error("schmudgen_run: step budget exceeded");
        st.fix_pivot();
        st.step();
    }
    return st.finish();
}

namespace {

bool factor_nonzero_at(const MultiPoly& p, std::span<const double> unit_point) {
    const double scale = p.max_abs_coeff() * std::max(1, p.term_count());
    return std::abs(p.eval(unit_point)) > 1e-10 * scale;
}

std::vector<const MultiPoly*> witness_test_polys(const SchmudgenTrace& trace, int r) {
    std::vector<const MultiPoly*> polys;
    if (!trace.factor_table) return polys;
    std::vector<char> used(trace.factor_table->size(), 0);
    auto mark = [&](const FactoredPoly& f) {
        const auto& e = f.factor_exponents();
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] > 0) used[i] = 1;
    };
    mark(trace.b);
    for (int j = 0; j < r; ++j) mark(trace.ds[j]);
    for (size_t i = 0; i < used.size(); ++i)
        if (used[i]) polys.push_back(&(*trace.factor_table)[i]);
    for (int j = 0; j < r; ++j) {
        const MultiPoly& tail = trace.ds[j].tail();
        if (tail.degree() > 0 || tail.is_zero()) polys.push_back(&tail);
    }
    return polys;
}

}  // namespace

bool witness_valid(const SchmudgenTrace& trace, std::span<const double> point) {
    double nrm = 0;
    for (double x : point) nrm += x * x;
    nrm = std::sqrt(nrm);
    if (nrm == 0) return false;
    std::vector<double> unit(point.begin(), point.end());
    for (auto& x : unit) x /= nrm;
    for (const MultiPoly* p : witness_test_polys(trace, trace.max_rank()))
        if (!factor_nonzero_at(*p, unit)) return false;
    return true;
}

MaxRankWitness max_rank_witness(const SchmudgenTrace& trace, const Tolerances& tol) {
    MaxRankWitness w;
    w.r = trace.max_rank();
    const int m = trace.nvars;
    if (w.r == 0 || m == 0) return w;  // zero pencil: any point works, none needed

    const auto polys = witness_test_polys(trace, w.r);
    const bool full_rank = w.r == trace.n;
    double best_score = -1.0;
    std::vector<double> best;
    int attempts = 0;

    auto consider = [&](const std::vector<double>& pt) {
        ++attempts;
        double nrm = 0;
        for (double x : pt) nrm += x * x;
        nrm = std::sqrt(nrm);
        if (nrm == 0) return;
        std::vector<double> unit = pt;
        for (auto& x : unit) x /= nrm;
        double margin = std::numeric_limits<double>::infinity();
        for (const MultiPoly* p : polys) {
            const double scale = p->max_abs_coeff() * std::max(1, p->term_count());
            const double v = std::abs(p->eval(unit));
            if (v <= 1e-10 * scale) return;  // some required polynomial vanishes here
            margin = std::min(margin, v / std::max(scale, 1e-300));
        }
        const double score = full_rank ? std::abs(determinant(trace.pencil.eval(unit))) : margin;
        if (score > best_score) {
            best_score = score;
            best = pt;
        }
    };

    // deterministic expanding boxes, then a seeded uniform fallback
    for (int box = 1; box <= 8 && attempts < tol.sample_bound; box *= 2) {
        double count = 1;
        for (int i = 0; i < m; ++i) count *= 2.0 * box + 1.0;
        if (count > tol.sample_bound - attempts) break;
        std::vector<int> e(m, -box);
        while (true) {
            int maxabs = 0;
            for (int i = 0; i < m; ++i) maxabs = std::max(maxabs, std::abs(e[i]));
            if (maxabs > box / 2) {  // shell only: inner points were already tried
                std::vector<double> pt(e.begin(), e.end());
                consider(pt);
            }
            int i = 0;
            while (i < m && e[i] == box) e[i++] = -box;
            if (i == m) break;
            e[i] += 1;
        }
    }
    std::mt19937_64 rng(tol.rng_seed);
    std::uniform_int_distribution<int> dist(-64, 64);
    while (attempts < tol.sample_bound && best_score < 0) {
        std::vector<double> pt(m);
        for (auto& x : pt) x = dist(rng);
        consider(pt);
    }
    if (best_score < 0) throw WitnessNotFoundError(attempts);
    w.lambda_hat = std::move(best);
    return w;
}

MaxRankWitness max_rank_numeric(const PolyMatrix& pencil, const Tolerances& tol, int upper_bound,
                                int samples) {
    const int m = pencil.nvars();
    std::mt19937_64 rng(tol.rng_seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    MaxRankWitness w;
    double best_margin = -1;
    for (int it = 0; it < samples; ++it) {
        std::vector<double> pt(m);
        for (auto& x : pt) x = gauss(rng);
        RankResult r = svd_rank(pencil.eval(pt), tol);
        const double margin =
            r.rank > 0 && r.sigma[0] > 0 ? r.sigma[r.rank - 1] / r.sigma[0] : 0.0;
        if (r.rank > w.r || (r.rank == w.r && margin > best_margin)) {
            w.r = r.rank;
            w.lambda_hat = pt;
            best_margin = margin;
        }
        if (w.r >= upper_bound && it >= 8) break;  // upper bound attained
    }
    return w;
}

}  // namespace sdc
