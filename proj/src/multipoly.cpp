#include "sdc/multipoly.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <map>
#include <numeric>
#include <unordered_map>

namespace sdc {

namespace {

int exp_degree(std::span<const std::uint16_t> e) {
    int d = 0;
    for (auto x : e) d += x;
    return d;
}

// Canonical term order: total degree ascending, then lexicographically
// descending exponents.  Within one degree this coincides with the dense
// rank used by the homogeneous kernels below, and it is monotone under
// monomial multiplication (so polynomial division leads are well behaved).
bool exp_less(const std::uint16_t* a, const std::uint16_t* b, int v) {
    int da = 0, db = 0;
    for (int i = 0; i < v; ++i) { da += a[i]; db += b[i]; }
    if (da != db) return da < db;
    for (int i = 0; i < v; ++i)
        if (a[i] != b[i]) return a[i] > b[i];
    return false;
}

// Binomial table, lazily grown; k stays tiny (< 9) in every caller.
std::uint64_t binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k == 0 || k == n) return 1;
    static std::vector<std::vector<std::uint64_t>> table;  // table[n][k], k <= 8
    if (static_cast<int>(table.size()) <= n) {
        size_t old = table.size();
        table.resize(n + 1);
        for (size_t i = old; i < table.size(); ++i) {
            table[i].assign(9, 0);
            table[i][0] = 1;
            for (int j = 1; j <= 8 && j <= static_cast<int>(i); ++j)
                table[i][j] = (i >= 1 ? (table[i - 1][j - 1] +
                                         (j <= static_cast<int>(i - 1) ? table[i - 1][j] : 0))
                                      : 0);
        }
    }
    if (k > 8) throw Error("binom: k out of supported range");
    return table[n][k];
}

// Monomials of fixed total degree in v variables, indexed by the canonical
// order above.
struct HomogBasis {
    int v, d;
    size_t size() const { return static_cast<size_t>(binom(d + v - 1, v - 1)); }
    size_t rank(const std::uint16_t* e) const {
        size_t r = 0;
        int psum = 0;
        for (int j = 0; j <= v - 2; ++j) {
            psum += e[v - 1 - j];
            r += binom(psum + j, j + 1);
        }
        return r;
    }
    // All exponent vectors in rank order, flattened.
    std::vector<std::uint16_t> enumerate() const {
        std::vector<std::uint16_t> out;
        out.reserve(size() * v);
        std::vector<std::uint16_t> e(v, 0);
        e[0] = static_cast<std::uint16_t>(d);
        while (true) {
            out.insert(out.end(), e.begin(), e.end());
            int j = -1;
            for (int i = v - 2; i >= 0; --i)
                if (e[i] > 0) { j = i; break; }
            if (j < 0) break;
            int rest = 1;
            for (int i = j + 1; i < v; ++i) { rest += e[i]; e[i] = 0; }
            e[j] -= 1;
            e[j + 1] = static_cast<std::uint16_t>(rest);
        }
        return out;
    }
};

constexpr size_t kDenseBudget = 8u << 20;  // max dense basis size

}  // namespace

void MultiPoly::push_term(std::span<const std::uint16_t> e, cplx c) {
    exps_.insert(exps_.end(), e.begin(), e.end());
    coeffs_.push_back(c);
}

void MultiPoly::normalize() {
    const int v = nvars_;
    const int t = term_count();
    std::vector<int> order(t);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        return exp_less(exps_.data() + static_cast<size_t>(i) * v,
                        exps_.data() + static_cast<size_t>(j) * v, v);
    });
    std::vector<std::uint16_t> ne;
    std::vector<cplx> nc;
    ne.reserve(exps_.size());
    nc.reserve(coeffs_.size());
    for (int idx : order) {
        const std::uint16_t* e = exps_.data() + static_cast<size_t>(idx) * v;
        if (!nc.empty() && std::memcmp(ne.data() + ne.size() - v, e, v * sizeof(std::uint16_t)) == 0) {
            nc.back() += coeffs_[idx];
        } else {
            ne.insert(ne.end(), e, e + v);
            nc.push_back(coeffs_[idx]);
        }
    }
    // drop exact zeros (cancellation of integer inputs is exact)
    exps_.clear();
    coeffs_.clear();
    for (size_t i = 0; i < nc.size(); ++i) {
        if (nc[i] == cplx(0.0, 0.0)) continue;
        exps_.insert(exps_.end(), ne.begin() + i * v, ne.begin() + (i + 1) * v);
        coeffs_.push_back(nc[i]);
    }
}

MultiPoly MultiPoly::constant(int nvars, cplx c) {
    MultiPoly p(nvars);
    if (c != cplx(0.0, 0.0)) {
        std::vector<std::uint16_t> e(nvars, 0);
        p.push_term(e, c);
    }
    return p;
}

MultiPoly MultiPoly::variable(int nvars, int index, cplx coeff) {
    if (index < 0 || index >= nvars) throw DimensionError("MultiPoly::variable index");
    MultiPoly p(nvars);
    if (coeff != cplx(0.0, 0.0)) {
        std::vector<std::uint16_t> e(nvars, 0);
        e[index] = 1;
        p.push_term(e, coeff);
    }
    return p;
}

MultiPoly MultiPoly::monomial(int nvars, std::span<const std::uint16_t> exps, cplx coeff) {
    if (static_cast<int>(exps.size()) != nvars) throw DimensionError("MultiPoly::monomial");
    MultiPoly p(nvars);
    if (coeff != cplx(0.0, 0.0)) p.push_term(exps, coeff);
    return p;
}

MultiPoly MultiPoly::from_terms(
    int nvars, const std::vector<std::pair<std::vector<std::uint16_t>, cplx>>& terms) {
    MultiPoly p(nvars);
    for (const auto& [e, c] : terms) {
        if (static_cast<int>(e.size()) != nvars) throw DimensionError("MultiPoly::from_terms");
        p.push_term(e, c);
    }
    p.normalize();
    return p;
}

bool MultiPoly::is_zero(double coeff_tol) const {
    for (const auto& c : coeffs_)
        if (std::abs(c) > coeff_tol) return false;
    return true;
}

int MultiPoly::degree() const {
    int d = -1;
    for (int t = 0; t < term_count(); ++t) d = std::max(d, exp_degree(exponent(t)));
    return d;
}

bool MultiPoly::is_homogeneous() const {
    if (is_zero()) return true;
    const int d = exp_degree(exponent(0));
    for (int t = 1; t < term_count(); ++t)
        if (exp_degree(exponent(t)) != d) return false;
    return true;
}

double MultiPoly::max_abs_coeff() const {
    double m = 0;
    for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
    if (nvars_ != o.nvars_) throw DimensionError("MultiPoly add");
    const int v = nvars_;
    MultiPoly r(v);
    r.exps_.reserve(exps_.size() + o.exps_.size());
    r.coeffs_.reserve(coeffs_.size() + o.coeffs_.size());
    int i = 0, j = 0;
    while (i < term_count() || j < o.term_count()) {
        int take;  // -1: this, 1: other, 0: both
        if (i >= term_count()) take = 1;
        else if (j >= o.term_count()) take = -1;
        else {
            const std::uint16_t* a = exps_.data() + static_cast<size_t>(i) * v;
            const std::uint16_t* b = o.exps_.data() + static_cast<size_t>(j) * v;
            if (exp_less(a, b, v)) take = -1;
            else if (exp_less(b, a, v)) take = 1;
            else take = 0;
        }
        if (take == -1) {
            r.push_term(exponent(i), coeffs_[i]);
            ++i;
        } else if (take == 1) {
            r.push_term(o.exponent(j), o.coeffs_[j]);
            ++j;
        } else {
            const cplx c = coeffs_[i] + o.coeffs_[j];
            if (c != cplx(0.0, 0.0)) r.push_term(exponent(i), c);
            ++i;
            ++j;
        }
    }
    return r;
}

MultiPoly MultiPoly::operator-() const {
    MultiPoly r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const { return *this + (-o); }

MultiPoly MultiPoly::operator*(cplx s) const {
    if (s == cplx(0.0, 0.0)) return MultiPoly(nvars_);
    MultiPoly r = *this;
    for (auto& c : r.coeffs_) c *= s;
    return r;
}

MultiPoly MultiPoly::conj_coeffs() const {
    MultiPoly r = *this;
    for (auto& c : r.coeffs_) c = std::conj(c);
    return r;
}

MultiPoly MultiPoly::real_part() const {
    MultiPoly r = *this;
    for (auto& c : r.coeffs_) c = cplx(c.real(), 0.0);
    r.normalize();
    return r;
}

MultiPoly MultiPoly::imag_part() const {
    MultiPoly r = *this;
    for (auto& c : r.coeffs_) c = cplx(c.imag(), 0.0);
    r.normalize();
    return r;
}

bool MultiPoly::operator==(const MultiPoly& o) const {
    return nvars_ == o.nvars_ && exps_ == o.exps_ && coeffs_ == o.coeffs_;
}

MultiPoly MultiPoly::pruned(double coeff_tol) const {
    MultiPoly r(nvars_);
    for (int t = 0; t < term_count(); ++t)
        if (std::abs(coeffs_[t]) > coeff_tol) r.push_term(exponent(t), coeffs_[t]);
    return r;
}

// Dense product over the fixed-degree monomial basis; used when both factors
// are homogeneous and the result basis fits the budget.
MultiPoly mul_dense_homog(const MultiPoly& a, const MultiPoly& b) {
    const int v = a.nvars_;
    const HomogBasis basis{v, a.degree() + b.degree()};
    std::vector<cplx> acc(basis.size(), cplx(0.0, 0.0));
    std::vector<std::uint16_t> e(v);
    const MultiPoly& small = a.term_count() <= b.term_count() ? a : b;
    const MultiPoly& big = a.term_count() <= b.term_count() ? b : a;
    for (int ts = 0; ts < small.term_count(); ++ts) {
        const auto es = small.exponent(ts);
        const cplx cs = small.coeffs_[ts];
        for (int tb = 0; tb < big.term_count(); ++tb) {
            const auto eb = big.exponent(tb);
            for (int k = 0; k < v; ++k) e[k] = static_cast<std::uint16_t>(es[k] + eb[k]);
            acc[basis.rank(e.data())] += cs * big.coeffs_[tb];
        }
    }
    MultiPoly r(v);
    const std::vector<std::uint16_t> all = basis.enumerate();
    for (size_t pos = 0; pos < acc.size(); ++pos) {
        if (acc[pos] == cplx(0.0, 0.0)) continue;
        r.push_term({all.data() + pos * v, static_cast<size_t>(v)}, acc[pos]);
    }
    return r;
}

MultiPoly mul_sparse(const MultiPoly& a, const MultiPoly& b) {
    const int v = a.nvars_;
    // packed-key hash accumulation when exponents fit, generic map otherwise
    int bits = 0;
    if (v <= 4) bits = 16;
    else if (v <= 8 && a.degree() + b.degree() < 256) bits = 8;
    MultiPoly r(v);
    if (bits > 0) {
        std::unordered_map<std::uint64_t, cplx> acc;
        acc.reserve(static_cast<size_t>(a.term_count()) + b.term_count());
        for (int i = 0; i < a.term_count(); ++i) {
            const auto ea = a.exponent(i);
            const cplx ca = a.coeffs_[i];
            for (int j = 0; j < b.term_count(); ++j) {
                const auto eb = b.exponent(j);
                std::uint64_t key = 0;
                for (int k = 0; k < v; ++k)
                    key |= static_cast<std::uint64_t>(ea[k] + eb[k]) << (bits * k);
                acc[key] += ca * b.coeffs_[j];
            }
        }
        std::vector<std::uint16_t> e(v);
        const std::uint64_t mask = bits == 16 ? 0xffffu : 0xffu;
        for (const auto& [key, c] : acc) {
            if (c == cplx(0.0, 0.0)) continue;
            for (int k = 0; k < v; ++k) e[k] = static_cast<std::uint16_t>((key >> (bits * k)) & mask);
            r.push_term(e, c);
        }
    } else {
        std::map<std::vector<std::uint16_t>, cplx> acc;
        std::vector<std::uint16_t> e(v);
        for (int i = 0; i < a.term_count(); ++i) {
            const auto ea = a.exponent(i);
            for (int j = 0; j < b.term_count(); ++j) {
                const auto eb = b.exponent(j);
                for (int k = 0; k < v; ++k) e[k] = static_cast<std::uint16_t>(ea[k] + eb[k]);
                acc[e] += a.coeffs_[i] * b.coeffs_[j];
            }
        }
        for (const auto& [ee, c] : acc)
            if (c != cplx(0.0, 0.0)) r.push_term(ee, c);
    }
    r.normalize();
    return r;
}

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
    if (nvars_ != o.nvars_) throw DimensionError("MultiPoly mul");
    if (is_zero() || o.is_zero()) return MultiPoly(nvars_);
    const size_t work = static_cast<size_t>(term_count()) * o.term_count();
    if (nvars_ >= 2 && nvars_ <= 8 && work > 4096 && is_homogeneous() && o.is_homogeneous()) {
        const HomogBasis basis{nvars_, degree() + o.degree()};
        if (basis.size() <= kDenseBudget) return mul_dense_homog(*this, o);
    }
    return mul_sparse(*this, o);
}

cplx MultiPoly::eval(std::span<const double> point) const {
    if (static_cast<int>(point.size()) != nvars_) throw DimensionError("MultiPoly::eval point");
    // per-variable power tables
    std::vector<int> maxe(nvars_, 0);
    for (int t = 0; t < term_count(); ++t) {
        const auto e = exponent(t);
        for (int k = 0; k < nvars_; ++k) maxe[k] = std::max<int>(maxe[k], e[k]);
    }
    std::vector<std::vector<double>> pw(nvars_);
    for (int k = 0; k < nvars_; ++k) {
        pw[k].resize(maxe[k] + 1);
        pw[k][0] = 1.0;
        for (int d = 1; d <= maxe[k]; ++d) pw[k][d] = pw[k][d - 1] * point[k];
    }
    cplx s = 0;
    for (int t = 0; t < term_count(); ++t) {
        const auto e = exponent(t);
        double mono = 1.0;
        for (int k = 0; k < nvars_; ++k) mono *= pw[k][e[k]];
        s += coeffs_[t] * mono;
    }
    return s;
}

std::optional<MultiPoly> MultiPoly::divide_exact(const MultiPoly& g, double coeff_tol) const {
    if (nvars_ != g.nvars_) throw DimensionError("MultiPoly::divide_exact");
    if (g.is_zero()) return std::nullopt;
    if (is_zero(coeff_tol)) return MultiPoly(nvars_);
    const int v = nvars_;

    if (is_homogeneous() && g.is_homogeneous() && v >= 2 && v <= 8) {
        const int df = degree(), dg = g.degree();
        if (df < dg) return std::nullopt;
        const HomogBasis fb{v, df};
        if (fb.size() <= kDenseBudget) {
            std::vector<cplx> rem(fb.size(), cplx(0.0, 0.0));
            for (int t = 0; t < term_count(); ++t) rem[fb.rank(exponent(t).data())] = coeffs_[t];
            const auto eg = g.exponent(g.term_count() - 1);  // leading term (canonical max)
            const cplx cg = g.coeffs_[g.term_count() - 1];
            const std::vector<std::uint16_t> all = fb.enumerate();
            MultiPoly q(v);  // built in descending order, reversed below
            std::vector<std::uint16_t> eq(v), etmp(v);
            for (size_t pos = fb.size(); pos-- > 0;) {
                const cplx c = rem[pos];
                if (std::abs(c) <= coeff_tol) continue;
                const std::uint16_t* ef = all.data() + pos * v;
                bool divisible = true;
                for (int k = 0; k < v; ++k) {
                    if (ef[k] < eg[k]) { divisible = false; break; }
                    eq[k] = static_cast<std::uint16_t>(ef[k] - eg[k]);
                }
                if (!divisible) return std::nullopt;
                const cplx qc = c / cg;
                q.push_term(eq, qc);
                for (int t = 0; t < g.term_count(); ++t) {
                    const auto e = g.exponent(t);
                    for (int k = 0; k < v; ++k) etmp[k] = static_cast<std::uint16_t>(eq[k] + e[k]);
                    rem[fb.rank(etmp.data())] -= qc * g.coeffs_[t];
                }
                rem[pos] = 0.0;  // the lead cancels by construction
            }
            q.normalize();
            return q;
        }
    }

    // generic sparse long division
    MultiPoly rem = pruned(coeff_tol);
    MultiPoly q(v);
    const auto eg = g.exponent(g.term_count() - 1);
    const cplx cg = g.coeffs_[g.term_count() - 1];
    std::vector<std::uint16_t> eq(v);
    while (!rem.is_zero()) {
        const int lead = rem.term_count() - 1;
        if (std::abs(rem.coeffs_[lead]) <= coeff_tol) {
            rem.exps_.resize(static_cast<size_t>(lead) * v);
            rem.coeffs_.resize(lead);
            continue;
        }
        const auto ef = rem.exponent(lead);
        for (int k = 0; k < v; ++k) {
            if (ef[k] < eg[k]) return std::nullopt;
            eq[k] = static_cast<std::uint16_t>(ef[k] - eg[k]);
        }
        const cplx qc = rem.coeffs_[lead] / cg;
        q.push_term(eq, qc);
        rem = rem - MultiPoly::monomial(v, eq, qc) * g;
    }
    q.normalize();
    return q;
}

std::string MultiPoly::to_string() const {
    if (is_zero()) return "0";
    const int v = nvars_;
    // graded lexicographic display: degree descending, then lex descending
    std::vector<int> order(term_count());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        const std::uint16_t* a = exps_.data() + static_cast<size_t>(i) * v;
        const std::uint16_t* b = exps_.data() + static_cast<size_t>(j) * v;
        int da = 0, db = 0;
        for (int k = 0; k < v; ++k) { da += a[k]; db += b[k]; }
        if (da != db) return da > db;
        for (int k = 0; k < v; ++k)
            if (a[k] != b[k]) return a[k] > b[k];
        return false;
    });

    auto fmt_num = [](double x) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return std::string(buf);
    };

    std::string out;
    for (size_t idx = 0; idx < order.size(); ++idx) {
        const int t = order[idx];
        const auto e = exponent(t);
        cplx c = coeffs_[t];
        const bool constant_term = exp_degree(e) == 0;

        std::string coeff_str;
        bool negate_joined = false;
        if (c.imag() == 0.0) {
            double re = c.real();
            if (idx > 0 && re < 0) { negate_joined = true; re = -re; }
            if (re == 1.0 && !constant_term) coeff_str = "";
            else coeff_str = fmt_num(re);
        } else if (c.real() == 0.0) {
            double im = c.imag();
            if (idx > 0 && im < 0) { negate_joined = true; im = -im; }
            coeff_str = (im == 1.0 && !constant_term) ? "i" : fmt_num(im) + "i";
        } else {
            coeff_str = "(" + fmt_num(c.real()) + (c.imag() >= 0 ? "+" : "-") +
                        fmt_num(std::abs(c.imag())) + "i)";
        }

        if (idx > 0) out += negate_joined ? " - " : " + ";
        std::string mono;
        for (int k = 0; k < v; ++k) {
            if (e[k] == 0) continue;
            if (!mono.empty()) mono += "·";
            mono += "λ" + std::to_string(k + 1);
            if (e[k] > 1) mono += "^" + std::to_string(e[k]);
        }
        if (mono.empty()) out += coeff_str.empty() ? "1" : coeff_str;
        else if (coeff_str.empty()) out += mono;
        else out += coeff_str + "·" + mono;
    }
    return out;
}

}  // namespace sdc
