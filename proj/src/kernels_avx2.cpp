#include "wittenlab/kernels.hpp"

#if defined(WITTENLAB_HAVE_AVX2)
#include <immintrin.h>

namespace wittenlab::kernels::detail {

namespace {

double dot_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
    alignas(32) double s[4];
    _mm256_store_pd(s, acc);
    double r = (s[0] + s[1]) + (s[2] + s[3]);
    for (; i < n; ++i) r += x[i] * y[i];
    return r;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) y[i] += a * x[i];
}

void scal_avx2(double a, double* x, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) x[i] *= a;
}

void tridiag_matvec_avx2(const double* d, const double* e, double corner, const double* x,
                         double* y, std::size_t n) {
    if (n < 8) {
        // tiny systems: plain loop
        y[0] = d[0] * x[0] + (n > 1 ? e[0] * x[1] + corner * x[n - 1] : 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) y[i] = e[i - 1] * x[i - 1] + d[i] * x[i] + e[i] * x[i + 1];
        if (n > 1) y[n - 1] = e[n - 2] * x[n - 2] + d[n - 1] * x[n - 1] + corner * x[0];
        return;
    }
    y[0] = d[0] * x[0] + e[0] * x[1] + corner * x[n - 1];
    std::size_t i = 1;
    for (; i + 4 < n; i += 4) {
        __m256d lo = _mm256_mul_pd(_mm256_loadu_pd(e + i - 1), _mm256_loadu_pd(x + i - 1));
        __m256d mid = _mm256_fmadd_pd(_mm256_loadu_pd(d + i), _mm256_loadu_pd(x + i), lo);
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(_mm256_loadu_pd(e + i), _mm256_loadu_pd(x + i + 1), mid));
    }
    for (; i + 1 < n; ++i) y[i] = e[i - 1] * x[i - 1] + d[i] * x[i] + e[i] * x[i + 1];
    y[n - 1] = e[n - 2] * x[n - 2] + d[n - 1] * x[n - 1] + corner * x[0];
}

const Table kAvx2{"avx2", dot_avx2, axpy_avx2, scal_avx2, tridiag_matvec_avx2};

}  // namespace

const Table* avx2_table() { return &kAvx2; }

}  // namespace wittenlab::kernels::detail
#endif
