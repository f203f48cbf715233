#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "wittenlab/eigensolve.hpp"
#include "wittenlab/errors.hpp"

using namespace wittenlab;

namespace {

SymTridiag laplacian(int n, double h, bool periodic) {
    const double s = 1.0 / (h * h);
    std::vector<double> d(n, 2 * s), e(n - 1, -s);
    return periodic ? SymTridiag(d, e, -s) : SymTridiag(d, e);
}

Eigen::MatrixXd dense(const SymTridiag& T) {
    const int n = int(T.n());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) A(i, i) = T.diag[i];
    for (int i = 0; i + 1 < n; ++i) A(i, i + 1) = A(i + 1, i) = T.off[i];
    if (T.corner) A(0, n - 1) = A(n - 1, 0) = *T.corner;
    return A;
}

SymTridiag random_tridiag(std::mt19937_64& rng, int n, bool cyclic) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> d(n), e(n - 1);
    for (auto& x : d) x = 3.0 * u(rng);
    for (auto& x : e) x = u(rng);
    return cyclic ? SymTridiag(d, e, u(rng)) : SymTridiag(d, e);
}

}  // namespace

TEST_CASE("sturm_count on small closed forms") {
    CHECK(sturm_count(SymTridiag({1, 2, 3}, {0, 0}), 2.5) == 2);
    CHECK(sturm_count(SymTridiag({2, 2}, {-1}), 2.0) == 1);
    CHECK(sturm_count(SymTridiag({1, 2, 3}, {0, 0}), 0.5) == 0);
    CHECK(sturm_count(SymTridiag({1, 2, 3}, {0, 0}), 3.5) == 3);
}

TEST_CASE("sturm_count matches the Dirichlet Laplacian spectrum") {
    const int n = 100;
    const double h = 1.0 / (n + 1);
    const SymTridiag T = laplacian(n, h, false);
    for (double lam : {10.0, 1000.0, 5e3, 2e4, 3.9e4}) {
        int expect = 0;
        for (int j = 1; j <= n; ++j) {
            const double s = std::sin(j * std::numbers::pi / (2.0 * (n + 1)));
            if (4.0 / (h * h) * s * s < lam) ++expect;
        }
        CHECK(sturm_count(T, lam) == expect);
    }
}

TEST_CASE("sturm_count rejects cyclic input") {
    CHECK_THROWS_AS(sturm_count(laplacian(8, 0.1, true), 0.0), CornerPresent);
}

TEST_CASE("eigs_lowest: periodic Laplacian has a doubly degenerate first level") {
    const int n = 64;
    const double h = 2 * std::numbers::pi / n;
    const SymTridiag T = laplacian(n, h, true);
    const auto ev = eigs_lowest(T, 3);
    REQUIRE(ev.size() == 3);
    const double l1 = 4.0 / (h * h) * std::pow(std::sin(std::numbers::pi / n), 2);
    CHECK(std::abs(ev[0].value) < 1e-10 * T.scale());
    CHECK(ev[1].value == doctest::Approx(l1).epsilon(1e-10));
    CHECK(ev[2].value == doctest::Approx(l1).epsilon(1e-10));
    CHECK(std::abs(std::inner_product(ev[1].vector.begin(), ev[1].vector.end(), ev[2].vector.begin(), 0.0)) < 1e-8);
}

TEST_CASE("eigs_lowest: diagonal matrix") {
    const auto ev = eigs_lowest(SymTridiag({5, 1, 9}, {0, 0}), 2);
    REQUIRE(ev.size() == 2);
    CHECK(ev[0].value == doctest::Approx(1.0));
    CHECK(ev[1].value == doctest::Approx(5.0));
    CHECK_THROWS_AS(eigs_lowest(SymTridiag({5, 1, 9}, {0, 0}), 4), DegenerateInput);
}

TEST_CASE("solve_shifted small cases") {
    auto x = solve_shifted(SymTridiag({1, 1, 1}, {0, 0}), 0.0, {1, 2, 3});
    CHECK(x[0] == doctest::Approx(1));
    CHECK(x[1] == doctest::Approx(2));
    CHECK(x[2] == doctest::Approx(3));
    auto y = solve_shifted(SymTridiag({2, 2}, {0}), 1.0, {1, 1});
    CHECK(y[0] == doctest::Approx(1));
    CHECK(y[1] == doctest::Approx(1));
}

TEST_CASE("solve_shifted: cyclic Laplacian residual") {
    const SymTridiag T = laplacian(8, 1.0, true);
    std::vector<double> e0(8, 0.0);
    e0[0] = 1.0;
    auto x = solve_shifted(T, -1.0, e0);
    auto r = T.apply(x);
    double res = 0;
    for (int i = 0; i < 8; ++i) res += std::pow(r[i] + x[i] - e0[i], 2);
    CHECK(std::sqrt(res) <= 1e-12);
}

TEST_CASE("solve_shifted signals a singular shift") {
    CHECK_THROWS_AS(solve_shifted(SymTridiag({1, 2, 3}, {0, 0}), 2.0, {1, 1, 1}), SingularShift);
}

TEST_CASE("random matrices agree with a dense reference solve") {
    std::mt19937_64 rng(20240611);
    for (int trial = 0; trial < 40; ++trial) {
        const bool cyclic = trial % 2 == 1;
        const int n = 5 + trial % 23;
        const SymTridiag T = random_tridiag(rng, n, cyclic);
        const int k = 1 + trial % std::min(n, 6);
        const auto ev = eigs_lowest(T, k, 1e-10);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(dense(T));
        REQUIRE(int(ev.size()) == k);
        for (int j = 0; j < k; ++j) {
            CHECK(std::abs(ev[j].value - ref.eigenvalues()(j)) <= 1e-10 * T.scale());
            CHECK(ev[j].residual <= 1e-10 * T.scale());
            double nv = 0;
            for (double v : ev[j].vector) nv += v * v;
            CHECK(std::abs(std::sqrt(nv) - 1.0) <= 1e-12);
            for (int i = 0; i < j; ++i) {
                const double ip = std::inner_product(ev[i].vector.begin(), ev[i].vector.end(), ev[j].vector.begin(), 0.0);
                CHECK(std::abs(ip) <= 1e-8);
            }
        }
        if (!cyclic) {
            // inertia consistency on the returned window
            const double a = ev.front().value - 1e-9, b = ev.back().value + 1e-9;
            CHECK(sturm_count(T, b) - sturm_count(T, a) == k);
        }
    }
}

TEST_CASE("eigs_lowest is deterministic") {
    std::mt19937_64 rng(7);
    const SymTridiag T = random_tridiag(rng, 300, true);
    const auto a = eigs_lowest(T, 4), b = eigs_lowest(T, 4);
    for (int j = 0; j < 4; ++j) {
        CHECK(a[j].value == b[j].value);
        CHECK(a[j].vector == b[j].vector);
    }
}

TEST_CASE("large periodic operator: lowest values and degeneracy") {
    const int n = 8192;
    const double h = 2 * std::numbers::pi / n;
    const SymTridiag T = laplacian(n, h, true);
    const auto ev = eigs_lowest(T, 5);
    const double l1 = 4.0 / (h * h) * std::pow(std::sin(std::numbers::pi / n), 2);
    const double l2 = 4.0 / (h * h) * std::pow(std::sin(2 * std::numbers::pi / n), 2);
    CHECK(ev[1].value == doctest::Approx(l1).epsilon(1e-9));
    CHECK(ev[2].value == doctest::Approx(l1).epsilon(1e-9));
    CHECK(ev[3].value == doctest::Approx(l2).epsilon(1e-9));
    CHECK(ev[4].value == doctest::Approx(l2).epsilon(1e-9));
}

TEST_CASE("general cyclic solve: nonsymmetric diagonally dominant system") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int n = 50;
    GenTridiag G;
    G.lower.resize(n);
    G.diag.resize(n);
    G.upper.resize(n);
    for (int i = 0; i < n; ++i) {
        G.lower[i] = u(rng);
        G.upper[i] = u(rng);
        G.diag[i] = 2.5 + u(rng);
    }
    std::vector<double> b(n);
    for (auto& x : b) x = u(rng);
    const auto x = solve_general(G, 0.3, b);
    const auto gx = G.apply(x);
    double res = 0;
    for (int i = 0; i < n; ++i) res = std::max(res, std::abs(gx[i] - 0.3 * x[i] - b[i]));
    CHECK(res <= 1e-12);
}
