#include "wittenlab/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace wittenlab::kernels {

namespace detail {
const Table* avx2_table();
}

namespace {

double dot_ref(const double* x, const double* y, std::size_t n) {
    // four partial sums, same association as the vector version
    double s[4] = {0, 0, 0, 0};
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        for (int k = 0; k < 4; ++k) s[k] += x[i + k] * y[i + k];
    double acc = (s[0] + s[1]) + (s[2] + s[3]);
    for (; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void axpy_ref(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scal_ref(double a, double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void tridiag_matvec_ref(const double* d, const double* e, double corner, const double* x,
                        double* y, std::size_t n) {
    if (n == 1) {
        y[0] = d[0] * x[0];
        return;
    }
    y[0] = d[0] * x[0] + e[0] * x[1] + corner * x[n - 1];
    for (std::size_t i = 1; i + 1 < n; ++i) y[i] = e[i - 1] * x[i - 1] + d[i] * x[i] + e[i] * x[i + 1];
    y[n - 1] = e[n - 2] * x[n - 2] + d[n - 1] * x[n - 1] + corner * x[0];
}

const Table kScalar{"scalar", dot_ref, axpy_ref, scal_ref, tridiag_matvec_ref};

const Table& pick() {
    const char* env = std::getenv("WITTENLAB_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return kScalar;
    if (const Table* t = avx2()) return *t;
    return kScalar;
}

}  // namespace

const Table& scalar() { return kScalar; }

const Table* avx2() {
#if defined(WITTENLAB_HAVE_AVX2)
    static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return ok ? detail::avx2_table() : nullptr;
#else
    return nullptr;
#endif
}

const Table& active() {
    static const Table& t = pick();
    return t;
}

}  // namespace wittenlab::kernels
