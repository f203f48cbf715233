#pragma once
#include <string>
#include <vector>

#include "wittenlab/circle_function.hpp"
#include "wittenlab/eigensolve.hpp"

namespace wittenlab {

// Conjugated: D = S_mid^{-1} D0 S with S = diag(e^{tf}); exact kernel e^{-tf}.
// Averaged: (Du)_{i+1/2} = (u_{i+1}-u_i)/h + t f'(mid)(u_{i+1}+u_i)/2.
enum class Scheme { Conjugated, Averaged };
Scheme parse_scheme(const std::string& s);
std::string to_string(Scheme s);

// Both schemes share the shape (Du)_i = b_i u_{i+1} - a_i u_i (indices mod n),
// 0-forms on nodes theta_i = i h, 1-forms on midpoints.
struct WittenMatrices {
    double t = 0.0;
    int n = 0;
    double h = 0.0;
    Scheme scheme = Scheme::Conjugated;
    std::vector<double> a, b;
    std::vector<double> f_nodes, f_mids;
    SymTridiag Delta0, Delta1;

    std::vector<double> apply_D(const std::vector<double>& u) const;
    std::vector<double> apply_Dt(const std::vector<double>& v) const;
    double node(int i) const { return h * i; }
    double mid(int i) const { return h * (i + 0.5); }
};

// Grid size rule: n >= 64 and n >= 40 sqrt(t), else GridTooCoarse.
void check_grid(double t, int n_grid);
// Default grid: max(n_min, ceil(40 sqrt(t) n_factor)) rounded up to even.
int default_grid(double t, int n_min = 8192, double n_factor = 1.0);

WittenMatrices assemble_witten(const CircleFunction& f, double t, int n_grid,
                               Scheme scheme = Scheme::Conjugated);

// Same assembly from sampled values (testing and f == 0).
WittenMatrices assemble_witten_sampled(std::vector<double> f_nodes, std::vector<double> f_mids,
                                       std::vector<double> fprime_mids, double t, Scheme scheme);

}  // namespace wittenlab
