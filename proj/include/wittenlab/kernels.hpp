#pragma once
#include <cstddef>

// Dense vector kernels used by the solvers. Each has a scalar reference
// implementation and, on x86-64, an AVX2+FMA variant picked at runtime.
namespace wittenlab::kernels {

struct Table {
    const char* name;
    double (*dot)(const double* x, const double* y, std::size_t n);
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    void (*scal)(double a, double* x, std::size_t n);
    // y = T x for a symmetric tridiagonal T (optionally with cyclic corner)
    void (*tridiag_matvec)(const double* diag, const double* off, double corner,
                           const double* x, double* y, std::size_t n);
};

const Table& scalar();
// nullptr when the CPU or the build lacks AVX2/FMA.
const Table* avx2();

// Selected once: AVX2 when available unless WITTENLAB_SIMD=scalar.
const Table& active();

inline double dot(const double* x, const double* y, std::size_t n) { return active().dot(x, y, n); }
inline void axpy(double a, const double* x, double* y, std::size_t n) { active().axpy(a, x, y, n); }
inline void scal(double a, double* x, std::size_t n) { active().scal(a, x, n); }
inline void tridiag_matvec(const double* d, const double* e, double corner, const double* x,
                           double* y, std::size_t n) {
    active().tridiag_matvec(d, e, corner, x, y, n);
}

}  // namespace wittenlab::kernels
