#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "wittenlab/kernels.hpp"

using namespace wittenlab;

namespace {
std::vector<double> sample(std::size_t n, double phase) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = std::sin(0.37 * double(i) + phase) * (1.0 + 0.01 * double(i % 7));
    return v;
}
}  // namespace

TEST_CASE("active table is one of the known variants") {
    const auto& t = kernels::active();
    const bool known = (&t == &kernels::scalar()) || (kernels::avx2() && &t == kernels::avx2());
    CHECK(known);
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
    const kernels::Table* v = kernels::avx2();
    if (!v) {
        MESSAGE("AVX2 not available; equivalence test skipped");
        return;
    }
    const auto& s = kernels::scalar();
    for (std::size_t n : {1u, 3u, 4u, 5u, 8u, 17u, 64u, 1001u}) {
        auto x = sample(n, 0.1), y = sample(n, 1.3);
        const double ds = s.dot(x.data(), y.data(), n), dv = v->dot(x.data(), y.data(), n);
        CHECK(std::abs(ds - dv) <= 1e-14 * (1.0 + std::abs(ds)) * double(n));

        auto ys = y, yv = y;
        s.axpy(-0.75, x.data(), ys.data(), n);
        v->axpy(-0.75, x.data(), yv.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(ys[i] - yv[i]) <= 1e-15 * (1.0 + std::abs(ys[i])));

        auto xs = x, xv = x;
        s.scal(3.5, xs.data(), n);
        v->scal(3.5, xv.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(xs[i] == xv[i]);

        if (n >= 2) {
            auto d = sample(n, 2.0), e = sample(n - 1, 0.5);
            std::vector<double> rs(n), rv(n);
            s.tridiag_matvec(d.data(), e.data(), 0.3, x.data(), rs.data(), n);
            v->tridiag_matvec(d.data(), e.data(), 0.3, x.data(), rv.data(), n);
            for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(rs[i] - rv[i]) <= 1e-14 * (1.0 + std::abs(rs[i])));
        }
    }
}

TEST_CASE("scalar matvec matches explicit periodic sum") {
    const std::size_t n = 6;
    std::vector<double> d{2, 2, 2, 2, 2, 2}, e{-1, -1, -1, -1, -1}, x{1, 2, 3, 4, 5, 6}, y(n);
    kernels::scalar().tridiag_matvec(d.data(), e.data(), -1.0, x.data(), y.data(), n);
    CHECK(y[0] == doctest::Approx(2 * 1 - 2 - 6));
    CHECK(y[3] == doctest::Approx(2 * 4 - 3 - 5));
    CHECK(y[5] == doctest::Approx(2 * 6 - 5 - 1));
}
