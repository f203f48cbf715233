#include "wittenlab/witten.hpp"

#include <cmath>
#include <numbers>

#include "wittenlab/errors.hpp"

namespace wittenlab {

Scheme parse_scheme(const std::string& s) {
    if (s == "conjugated") return Scheme::Conjugated;
    if (s == "averaged") return Scheme::Averaged;
    throw InputError("unknown scheme '" + s + "' (conjugated|averaged)");
}

std::string to_string(Scheme s) { return s == Scheme::Conjugated ? "conjugated" : "averaged"; }

std::vector<double> WittenMatrices::apply_D(const std::vector<double>& u) const {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = b[i] * u[(i + 1) % n] - a[i] * u[i];
    return v;
}

std::vector<double> WittenMatrices::apply_Dt(const std::vector<double>& v) const {
    std::vector<double> u(n);
    for (int j = 0; j < n; ++j) u[j] = b[(j + n - 1) % n] * v[(j + n - 1) % n] - a[j] * v[j];
    return u;
}

void check_grid(double t, int n_grid) {
    if (n_grid < 64 || n_grid < 40.0 * std::sqrt(std::max(t, 0.0)))
        throw GridTooCoarse("n_grid=" + std::to_string(n_grid) + " too coarse for t=" +
                            std::to_string(t) + " (need >= 64 and >= 40 sqrt(t))");
}

int default_grid(double t, int n_min, double n_factor) {
    int n = static_cast<int>(std::ceil(40.0 * std::sqrt(std::max(t, 0.0)) * n_factor));
    n = std::max(n, std::max(n_min, 64));
    return n + (n % 2);
}

WittenMatrices assemble_witten_sampled(std::vector<double> fn, std::vector<double> fm,
                                       std::vector<double> fpm, double t, Scheme scheme) {
    const int n = static_cast<int>(fn.size());
    if (fm.size() != fn.size() || fpm.size() != fn.size()) throw InputError("sample size mismatch");
    check_grid(t, n);
    WittenMatrices W;
    W.t = t;
    W.n = n;
    W.h = 2.0 * std::numbers::pi / n;
    W.scheme = scheme;
    W.a.resize(n);
    W.b.resize(n);
    const double ih = 1.0 / W.h;
    for (int i = 0; i < n; ++i) {
        if (scheme == Scheme::Conjugated) {
            W.a[i] = std::exp(t * (fn[i] - fm[i])) * ih;
            W.b[i] = std::exp(t * (fn[(i + 1) % n] - fm[i])) * ih;
        } else {
            W.a[i] = ih - 0.5 * t * fpm[i];
            W.b[i] = ih + 0.5 * t * fpm[i];
        }
    }
    std::vector<double> d0(n), e0(n - 1), d1(n), e1(n - 1);
    for (int j = 0; j < n; ++j) {
        const double bp = W.b[(j + n - 1) % n];
        d0[j] = W.a[j] * W.a[j] + bp * bp;
        d1[j] = W.a[j] * W.a[j] + W.b[j] * W.b[j];
    }
    for (int j = 0; j + 1 < n; ++j) {
        e0[j] = -W.a[j] * W.b[j];
        e1[j] = -W.b[j] * W.a[j + 1];
    }
    // (n-1, 0) couplings through row n-1 of D, which wraps to column 0
    double c0 = -W.a[n - 1] * W.b[n - 1];
    double c1 = -W.b[n - 1] * W.a[0];
    W.Delta0 = SymTridiag(std::move(d0), std::move(e0), c0);
    W.Delta1 = SymTridiag(std::move(d1), std::move(e1), c1);
    W.f_nodes = std::move(fn);
    W.f_mids = std::move(fm);
    return W;
}

WittenMatrices assemble_witten(const CircleFunction& f, double t, int n_grid, Scheme scheme) {
    check_grid(t, n_grid);
    const double h = 2.0 * std::numbers::pi / n_grid;
    std::vector<double> fn(n_grid), fm(n_grid), fpm(n_grid);
    for (int i = 0; i < n_grid; ++i) {
        fn[i] = f.value(h * i);
        fm[i] = f.value(h * (i + 0.5));
        fpm[i] = f.d1(h * (i + 0.5));
    }
    return assemble_witten_sampled(std::move(fn), std::move(fm), std::move(fpm), t, scheme);
}

}  // namespace wittenlab
