#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "sdc/jointdiag.hpp"
#include "sdc/eig.hpp"
#include "testutil.hpp"

using namespace sdc;
using namespace sdc::test;

namespace {

Matrix rotation_matrix(int n, int u, int v, double c, cplx s) {
    Matrix r = Matrix::identity(n);
    r(u, u) = c;
    r(u, v) = -std::conj(s);
    r(v, u) = s;
    r(v, v) = c;
    return r;
}

}  // namespace

TEST_CASE("build_Muv row pattern") {
    // single 2x2 Hermitian [[a, b],[conj b, d]] gives rows
    // (conj b, a - d, -b) and (b, a - d, -conj b)
    Matrix a(2, 2);
    a(0, 0) = 2.0;
    a(1, 1) = -1.0;
    a(0, 1) = cplx(3, 4);
    a(1, 0) = cplx(3, -4);
    const Matrix m = build_Muv({a}, 0, 1);
    REQUIRE(m.rows() == 2);
    CHECK(m(0, 0) == cplx(3, -4));
    CHECK(m(0, 1) == cplx(3, 0));
    CHECK(m(0, 2) == cplx(-3, -4));
    CHECK(m(1, 0) == cplx(3, -4));
    CHECK(m(1, 1) == cplx(3, 0));
    CHECK(m(1, 2) == -cplx(3, 4));

    // diagonal family: only the middle column is populated
    const Matrix d = mat2({5, 0, 0, 2});
    const Matrix md = build_Muv({d}, 0, 1);
    CHECK(std::abs(md(0, 0)) == 0.0);
    CHECK(std::abs(md(0, 2)) == 0.0);
    CHECK(md(0, 1) == cplx(3, 0));
}

TEST_CASE("rotation update identity: predicted off2 equals the recomputed one") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uang(-0.78, 0.78);
    std::uniform_real_distribution<double> uphi(-3.14, 3.14);
    for (int rep = 0; rep < 200; ++rep) {
        const int n = 2 + static_cast<int>(rng() % 5);
        const int m = 1 + static_cast<int>(rng() % 4);
        const bool real = rep % 3 == 0;
        std::vector<Matrix> mats;
        for (int i = 0; i < m; ++i) mats.push_back(random_hermitian(n, rng, real).mat());
        const int u = static_cast<int>(rng() % (n - 1));
        const int v = u + 1 + static_cast<int>(rng() % (n - u - 1));
        const double theta = uang(rng);
        const double phi = real ? 0.0 : uphi(rng);
        const double c = std::cos(theta);
        const cplx s = std::polar(std::sin(theta), phi);

        const Matrix muv = build_Muv(mats, u, v);
        double contrib = 0;
        for (const auto& a : mats) contrib += abs2(a(u, v)) + abs2(a(v, u));
        const double predicted = off2(mats) - contrib + muv_objective(muv, theta, phi);

        const Matrix r = rotation_matrix(n, u, v, c, s);
        std::vector<Matrix> rotated;
        for (const auto& a : mats) rotated.push_back(r * a * r.adjoint());
        const double actual = off2(rotated);
        CHECK(std::abs(actual - predicted) <= 1e-10 * std::max(1.0, actual));
    }
}

TEST_CASE("optimal_rotation identities and the classical 2x2 angle") {
    const Rotation ident = optimal_rotation(Matrix(2, 3), 0.0);
    CHECK(ident.is_identity());

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int rep = 0; rep < 50; ++rep) {
        Matrix a(2, 2);
        a(0, 0) = u(rng);
        a(1, 1) = u(rng);
        const double b = u(rng);
        a(0, 1) = b;
        a(1, 0) = b;
        if (std::abs(b) < 1e-3) continue;
        double contrib = 2 * b * b;
        const Matrix muv = build_Muv({a}, 0, 1);
        const Rotation rot = optimal_rotation(muv, contrib, /*real_mode=*/true);
        CHECK(rot.s.imag() == 0.0);
        // the optimal rotation annihilates the off-diagonal entry, exactly as
        // the classical symmetric Jacobi angle does
        const Matrix r = rotation_matrix(2, 0, 1, rot.c, rot.s);
        const Matrix rotated = r * a * r.adjoint();
        CHECK(std::abs(rotated(0, 1)) < 1e-10 * (1 + a.frobenius_norm()));
        // classical zeroing angle for the C' = R C R* convention:
        // cos(2t) b + sin(2t) (a11 - a22)/2 = 0
        const double theta_classical =
            0.5 * std::atan2(-2 * b, a(0, 0).real() - a(1, 1).real());
        const double theta_found = std::atan2(rot.s.real(), rot.c);
        const double diff = std::remainder(theta_found - theta_classical, 3.14159265358979323846 / 2);
        CHECK(std::abs(diff) < 1e-8);
    }
}

TEST_CASE("optimal_rotation beats an exhaustive grid oracle") {
    std::mt19937_64 rng(13);
    const MatrixFamily f = random_commuting_family(4, 2, rng);
    std::vector<Matrix> mats;
    for (const auto& c : f.members()) mats.push_back(c.mat());
    const Matrix muv = build_Muv(mats, 0, 1);
    double contrib = 0;
    for (const auto& a : mats) contrib += abs2(a(0, 1)) + abs2(a(1, 0));
    const Rotation rot = optimal_rotation(muv, contrib);
    const double ours = muv_objective(muv, std::atan2(std::abs(rot.s), rot.c),
                                      std::abs(rot.s) > 0 ? std::arg(rot.s) : 0.0);
    // exhaustive 0.001-resolution grid over (theta, phi)
    double best = std::numeric_limits<double>::infinity();
    const double pi = 3.14159265358979323846;
    for (double theta = -pi / 4; theta <= pi / 4; theta += 1e-3)
        for (double phi = -pi; phi <= pi; phi += 1e-3)
            best = std::min(best, muv_objective(muv, theta, phi));
    CHECK(ours <= best + 1e-8 * (1 + best));
}

TEST_CASE("joint_diagonalize: diagonal family is a no-op") {
    MatrixFamily f({make_hermitian(mat2({1, 0, 0, 2})), make_hermitian(mat2({5, 0, 0, 3}))});
    const JointDiagResult jd = joint_diagonalize(f);
    CHECK(jd.sweeps == 0);
    CHECK(jd.converged);
    CHECK((jd.u - Matrix::identity(2)).frobenius_norm() == 0.0);
}

TEST_CASE("joint_diagonalize on constructed commuting families") {
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 12; ++rep) {
        const int n = 2 + static_cast<int>(rng() % 7);
        const int m = 1 + static_cast<int>(rng() % 4);
        const bool real = rep % 2 == 0;
        const MatrixFamily f = random_commuting_family(n, m, rng, real);
        const JointDiagResult jd = joint_diagonalize(f);
        CHECK(jd.commuting_on_entry);
        CHECK(jd.converged);
        CHECK((jd.u.adjoint() * jd.u - Matrix::identity(n)).frobenius_norm() <= 1e-12 * n);
        for (size_t k = 1; k < jd.off2_history.size(); ++k)
            CHECK(jd.off2_history[k] <= jd.off2_history[k - 1]);
        CHECK(backward_error(f, jd.u) < 1e-10);
        if (real) CHECK(jd.u.max_imag_abs() == 0.0);

        // diagonal recovery: eigenvalue multisets survive the joint transform
        for (int i = 0; i < m; ++i) {
            const Matrix t = jd.u.adjoint() * f[i].mat() * jd.u;
            std::vector<double> got(n);
            for (int k = 0; k < n; ++k) got[k] = t(k, k).real();
            std::sort(got.begin(), got.end());
            std::vector<double> want = hermitian_eig(f[i]).lam;
            std::sort(want.begin(), want.end());
            for (int k = 0; k < n; ++k)
                CHECK(got[k] == doctest::Approx(want[k]).epsilon(1e-8));
        }
    }
}

TEST_CASE("joint_diagonalize at the benchmark size") {
    const MatrixFamily f = [] {
        std::mt19937_64 rng(23);
        return random_commuting_family(20, 10, rng);
    }();
    const JointDiagResult jd = joint_diagonalize(f);
    CHECK(jd.converged);
    const double err = backward_error(f, jd.u);
    CHECK(err <= 8.64e-12);  // an order around 1e-12 is the expected scale here
}

TEST_CASE("single Hermitian matrix agrees with hermitian_eig") {
    std::mt19937_64 rng(29);
    const HermitianMatrix a = random_hermitian(6, rng);
    const MatrixFamily f({a});
    const JointDiagResult jd = joint_diagonalize(f);
    CHECK(jd.converged);
    std::vector<double> got(6);
    const Matrix t = jd.u.adjoint() * a.mat() * jd.u;
    for (int k = 0; k < 6; ++k) got[k] = t(k, k).real();
    std::sort(got.begin(), got.end(), std::greater<>());
    const std::vector<double> want = hermitian_eig(a).lam;
    for (int k = 0; k < 6; ++k) CHECK(got[k] == doctest::Approx(want[k]).epsilon(1e-9));
}
