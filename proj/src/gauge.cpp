#include "wittenlab/gauge.hpp"

#include <algorithm>
#include <cmath>

#include "wittenlab/errors.hpp"

namespace wittenlab {

namespace {

double sgn(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

}  // namespace

// signed log-sum-exp over (tau_i, s_i)
LogReal log_sum(const std::vector<double>& tau, const std::vector<double>& s) {
    double M = -INFINITY;
    for (std::size_t i = 0; i < tau.size(); ++i)
        if (s[i] != 0.0) M = std::max(M, tau[i]);
    if (M == -INFINITY) return {};
    double sum = 0.0;
    for (std::size_t i = 0; i < tau.size(); ++i)
        if (s[i] != 0.0) sum += s[i] * std::exp(tau[i] - M);
    if (sum == 0.0) return {};
    return {sum > 0 ? 1.0 : -1.0, M + std::log(std::fabs(sum))};
}

LogReal LogReal::from(double x) {
    if (x == 0.0) return {};
    return {sgn(x), std::log(std::fabs(x))};
}

LogReal LogReal::operator*(const LogReal& o) const {
    if (sign == 0.0 || o.sign == 0.0) return {};
    return {sign * o.sign, log + o.log};
}

void ScaledVector::renormalize() {
    double mx = 0.0;
    for (double v : m) mx = std::max(mx, std::fabs(v));
    if (mx == 0.0 || !std::isfinite(mx)) {
        if (!std::isfinite(mx)) throw Overflow("non-finite mantissa");
        return;
    }
    for (double& v : m) v /= mx;
    log_scale += std::log(mx);
}

bool ScaledVector::zero() const {
    for (double v : m)
        if (v != 0.0) return false;
    return true;
}

ScaledVector combine(const std::vector<const ScaledVector*>& xs, const std::vector<double>& coeffs) {
    if (xs.empty() || xs.size() != coeffs.size()) throw InputError("combine: size mismatch");
    double top = -INFINITY;
    for (std::size_t j = 0; j < xs.size(); ++j)
        if (coeffs[j] != 0.0) top = std::max(top, xs[j]->log_scale + std::log(std::fabs(coeffs[j])));
    ScaledVector r;
    r.m.assign(xs[0]->m.size(), 0.0);
    if (top == -INFINITY) return r;
    r.log_scale = top;
    for (std::size_t j = 0; j < xs.size(); ++j) {
        if (coeffs[j] == 0.0) continue;
        double c = coeffs[j] * std::exp(xs[j]->log_scale - top);
        if (c == 0.0) continue;
        for (std::size_t i = 0; i < r.m.size(); ++i) r.m[i] += c * xs[j]->m[i];
    }
    r.renormalize();
    return r;
}

Gauge::Gauge(const WittenMatrices& W) : W_(&W), t_(W.t) {
    if (W.scheme != Scheme::Conjugated)
        throw InputError("gauge coordinates need the conjugated scheme");
    const int n = W.n;
    G0_.lower.resize(n);
    G0_.diag.resize(n);
    G0_.upper.resize(n);
    G1_ = G0_;
    for (int i = 0; i < n; ++i) {
        const double bp = W.b[(i + n - 1) % n];
        G0_.lower[i] = -bp * bp;
        G0_.upper[i] = -W.a[i] * W.a[i];
        G0_.diag[i] = bp * bp + W.a[i] * W.a[i];
        G1_.lower[i] = -W.a[i] * W.a[i];
        G1_.upper[i] = -W.b[i] * W.b[i];
        G1_.diag[i] = W.a[i] * W.a[i] + W.b[i] * W.b[i];
    }
    G0_.cyclic = G1_.cyclic = true;
}

LogReal Gauge::inner(const ScaledVector& x, const ScaledVector& y, int degree) const {
    const int n = W_->n;
    std::vector<double> tau(n), s(n);
    for (int i = 0; i < n; ++i) {
        double prod = x.m[i] * y.m[i];
        s[i] = sgn(prod);
        tau[i] = prod == 0.0 ? 0.0 : log_weight(degree, i) + std::log(std::fabs(x.m[i])) + std::log(std::fabs(y.m[i]));
    }
    return log_sum(tau, s).scaled(x.log_scale + y.log_scale + std::log(W_->h));
}

double Gauge::log_norm(const ScaledVector& x, int degree) const {
    LogReal r = inner(x, x, degree);
    if (r.sign == 0.0) return -INFINITY;
    return 0.5 * r.log;
}

ScaledVector Gauge::normalized(ScaledVector x, int degree) const {
    double ln = log_norm(x, degree);
    if (ln == -INFINITY) throw DegenerateInput("cannot normalize the zero form");
    x.log_scale -= ln;
    return x;
}

ScaledVector Gauge::d(const ScaledVector& w) const {
    const int n = W_->n;
    std::vector<double> tau(n), s(n);
    double c = -INFINITY;
    for (int i = 0; i < n; ++i) {
        double dm = w.m[(i + 1) % n] - w.m[i];
        s[i] = sgn(dm);
        tau[i] = dm == 0.0 ? 0.0 : -2.0 * t_ * W_->f_mids[i] + std::log(std::fabs(dm));
        if (dm != 0.0) c = std::max(c, tau[i]);
    }
    ScaledVector p;
    p.m.assign(n, 0.0);
    if (c == -INFINITY) return p;
    for (int i = 0; i < n; ++i)
        if (s[i] != 0.0) p.m[i] = s[i] * std::exp(tau[i] - c);
    p.log_scale = w.log_scale + c - std::log(W_->h);
    return p;
}

LogReal Gauge::pair_d(const ScaledVector& p, const ScaledVector& w) const {
    const int n = W_->n;
    // mantissas are bounded by 1, a plain sum is safe
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += p.m[i] * (w.m[(i + 1) % n] - w.m[i]);
    return LogReal::from(sum).scaled(p.log_scale + w.log_scale);
}

ScaledVector Gauge::from_log_physical(const std::vector<double>& log_abs, const std::vector<double>& sign,
                                      int degree) const {
    const int n = W_->n;
    std::vector<double> tau(n);
    double c = -INFINITY;
    for (int i = 0; i < n; ++i) {
        if (sign[i] == 0.0) continue;
        tau[i] = log_abs[i] + (degree == 0 ? t_ * W_->f_nodes[i] : -t_ * W_->f_mids[i]);
        c = std::max(c, tau[i]);
    }
    ScaledVector x;
    x.m.assign(n, 0.0);
    if (c == -INFINITY) return x;
    for (int i = 0; i < n; ++i)
        if (sign[i] != 0.0) x.m[i] = sign[i] * std::exp(tau[i] - c);
    x.log_scale = c;
    return x;
}

ScaledVector Gauge::from_physical(const std::vector<double>& u, int degree) const {
    std::vector<double> la(u.size()), s(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        s[i] = sgn(u[i]);
        la[i] = u[i] == 0.0 ? 0.0 : std::log(std::fabs(u[i]));
    }
    return from_log_physical(la, s, degree);
}

std::vector<double> Gauge::to_physical(const ScaledVector& x, int degree) const {
    const int n = W_->n;
    std::vector<double> u(n);
    for (int i = 0; i < n; ++i) {
        double e = degree == 0 ? -t_ * W_->f_nodes[i] : t_ * W_->f_mids[i];
        u[i] = x.m[i] == 0.0 ? 0.0 : x.m[i] * std::exp(x.log_scale + e);
    }
    return u;
}

ScaledVector Gauge::resolvent(const ScaledVector& x, int degree, double sigma) const {
    ScaledVector r;
    r.m = solve_general(op(degree), sigma, x.m);
    r.log_scale = x.log_scale;
    r.renormalize();
    return r;
}

double Gauge::mass_fraction(const ScaledVector& x, int degree, const std::vector<char>& mask) const {
    const int n = W_->n;
    std::vector<double> tau(n), s_all(n), s_in(n);
    for (int i = 0; i < n; ++i) {
        bool nz = x.m[i] != 0.0;
        s_all[i] = nz ? 1.0 : 0.0;
        s_in[i] = nz && mask[i] ? 1.0 : 0.0;
        tau[i] = nz ? log_weight(degree, i) + 2.0 * std::log(std::fabs(x.m[i])) : 0.0;
    }
    LogReal all = log_sum(tau, s_all), in = log_sum(tau, s_in);
    if (all.sign == 0.0) throw DegenerateInput("mass of the zero form");
    if (in.sign == 0.0) return 0.0;
    return std::exp(in.log - all.log);
}

}  // namespace wittenlab
