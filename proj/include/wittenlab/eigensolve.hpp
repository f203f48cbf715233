#pragma once
#include <cstddef>
#include <optional>
#include <vector>

namespace wittenlab {

// Real symmetric tridiagonal matrix; `corner` couples entries (0,n-1) and
// (n-1,0) for periodic problems.
struct SymTridiag {
    std::vector<double> diag;
    std::vector<double> off;
    std::optional<double> corner;

    SymTridiag() = default;
    SymTridiag(std::vector<double> d, std::vector<double> e, std::optional<double> c = std::nullopt);

    std::size_t n() const { return diag.size(); }
    bool cyclic() const { return corner.has_value(); }
    // max(1, max|diag| + 2 max|off| + 2|corner|)
    double scale() const;
    // Gershgorin interval [lo, hi]
    std::pair<double, double> gershgorin() const;
    void apply(const double* x, double* y) const;
    std::vector<double> apply(const std::vector<double>& x) const;
};

struct EigenPair {
    double value = 0.0;
    std::vector<double> vector;
    double residual = 0.0;  // ||Av - value v||_2 with ||v||_2 = 1
};

// Eigenvalues of T (no corner) strictly below lambda.
int sturm_count(const SymTridiag& T, double lambda);

// The k smallest eigenpairs, ascending. Acyclic: bisection + inverse
// iteration. Cyclic: shift-invert Lanczos with full reorthogonalization.
std::vector<EigenPair> eigs_lowest(const SymTridiag& T, int k, double tol = 1e-10);

// (T - sigma I)^{-1} rhs in O(n); cyclic case by a rank-2 correction.
std::vector<double> solve_shifted(const SymTridiag& T, double sigma, const std::vector<double>& rhs);

// General (nonsymmetric) tridiagonal with optional cyclic corners.
// Row i reads lower[i]*x[i-1] + diag[i]*x[i] + upper[i]*x[i+1]; indices wrap
// when `cyclic` is set (lower[0] sits at column n-1, upper[n-1] at column 0).
struct GenTridiag {
    std::vector<double> lower, diag, upper;
    bool cyclic = true;
    std::size_t n() const { return diag.size(); }
    double scale() const;
    std::vector<double> apply(const std::vector<double>& x) const;
};

// (G - sigma I)^{-1} rhs without pivoting (Thomas + Sherman-Morrison-Woodbury).
std::vector<double> solve_general(const GenTridiag& G, double sigma, const std::vector<double>& rhs);

// Deterministic start vector: normalized all-ones perturbed by an index stencil.
std::vector<double> start_vector(std::size_t n);

}  // namespace wittenlab
