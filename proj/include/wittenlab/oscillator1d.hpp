#pragma once
#include <vector>

#include "wittenlab/eigensolve.hpp"

namespace wittenlab {

// Harmonic:   -d^2/dx^2 + 4t^2 x^2 + sign*2t
// Anharmonic: -d^2/dx^2 + 9a^2 t^2 x^4 + sign*6 a t x   (sign = -1 is P(at))
struct Model1D {
    enum class Kind { Harmonic, Anharmonic };
    Kind kind = Kind::Harmonic;
    double t = 1.0;
    double a = 0.0;  // anharmonic only
    int sign = -1;   // shift_sign or form_sign

    static Model1D harmonic(double t, int shift_sign);
    static Model1D anharmonic(double a, double t, int form_sign);

    double potential(double x) const;
    // natural eigenvalue unit: 4t (harmonic) or |at|^{2/3} (anharmonic)
    double unit() const;
    // closed-form harmonic level m
    double harmonic_level(int m) const;
};

struct Spectrum1D {
    Model1D model;
    double L = 0.0;
    int n = 0;                       // finest grid used
    std::vector<double> values;      // Richardson-extrapolated, ascending
    std::vector<double> raw;         // finest-grid discrete values
    std::vector<std::vector<double>> vectors;  // finest grid, sum v^2 h = 1
    std::vector<double> grid() const;
};

// L = 8|at|^{-1/3} max(1,(k/2)^{1/3}) (anharmonic); V(L) >= 50 E_top (harmonic)
double auto_domain(const Model1D& m, int k);

// 3-point FD with Dirichlet cutoff: h = 2L/(n+1), x_i = -L + (i+1)h.
SymTridiag discretize(const Model1D& m, double L, int n);

// Discrete eigenpairs on one grid. Values are Rayleigh quotients evaluated in
// difference form (no cancellation in the kinetic term); vectors satisfy
// sum v^2 h = 1. Throws DomainTooSmall on boundary mass > 1e-8.
struct GridSpectrum {
    std::vector<double> values;
    std::vector<std::vector<double>> vectors;
};
GridSpectrum grid_spectrum(const Model1D& m, double L, int n, int k);

// k lowest eigenvalues, refined (n -> 2n+1) with Richardson extrapolation
// until two successive extrapolants agree to tol relatively.
Spectrum1D spectrum(const Model1D& m, int k, double tol = 1e-9, int n0 = 4095, double L = 0.0);

struct ReflectionReport {
    double spectral = 0.0;  // max_m |l+ - l-| / l-
    double vector = 0.0;    // max_m min_s ||v+(x) - s v-(-x)||_inf
};
ReflectionReport verify_reflection(double a, double t, int k);

struct GroundState {
    double gap_ratio = 0.0;   // (e2 - e1)/e1
    double min_entry = 0.0;   // min of the sign-normalized ground vector
    double xi1_at_zero = 0.0; // continuum-rescaled, L2-normalized value at 0
};
GroundState ground_state_properties(const Model1D& m, int n0 = 4095);

// max over t, m < k of |e_m(P(t)) - t^{2/3} e_m(P(1))| / (t^{2/3} e_m(P(1)))
double verify_scaling(const std::vector<double>& t_list, int k);

}  // namespace wittenlab
