#include "wittenlab/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "wittenlab/errors.hpp"
#include "wittenlab/kernels.hpp"

namespace wittenlab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kInverseSweeps = 5;
constexpr int kLanczosSteps = 200;

// LU of an acyclic tridiagonal matrix without pivoting. lower[i] multiplies
// x[i-1] (i >= 1), upper[i] multiplies x[i+1] (i <= n-2).
class TriLU {
public:
    TriLU(const double* lower, const double* diag, const double* upper, std::size_t n, double sigma,
          double scale)
        : n_(n), mult_(n, 0.0), piv_(n), upper_(upper, upper + (n > 0 ? n - 1 : 0)) {
        const double tiny = kEps * kEps * scale;
        piv_[0] = diag[0] - sigma;
        check(0, tiny);
        for (std::size_t i = 1; i < n; ++i) {
            mult_[i] = lower[i] / piv_[i - 1];
            piv_[i] = diag[i] - sigma - mult_[i] * upper[i - 1];
            check(i, tiny);
        }
    }

    void solve(double* x) const {
        for (std::size_t i = 1; i < n_; ++i) x[i] -= mult_[i] * x[i - 1];
        x[n_ - 1] /= piv_[n_ - 1];
        for (std::size_t i = n_ - 1; i-- > 0;) x[i] = (x[i] - upper_[i] * x[i + 1]) / piv_[i];
    }

private:
    void check(std::size_t i, double tiny) const {
        if (!std::isfinite(piv_[i]) || std::abs(piv_[i]) <= tiny)
            throw SingularShift("pivot " + std::to_string(i) + " below safe threshold");
    }

    std::size_t n_;
    std::vector<double> mult_, piv_, upper_;
};

// Shared cyclic solve: acyclic core (lower/diag/upper) plus corners
// A(0,n-1) = p and A(n-1,0) = q handled by Sherman-Morrison-Woodbury.
std::vector<double> cyclic_solve(const std::vector<double>& lower, const std::vector<double>& diag,
                                 const std::vector<double>& upper, double p, double q, double sigma,
                                 double scale, const std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    TriLU lu(lower.data(), diag.data(), upper.data(), n, sigma, scale);
    std::vector<double> y = rhs;
    lu.solve(y.data());
    if (p == 0.0 && q == 0.0) return y;
    std::vector<double> z0(n, 0.0), z1(n, 0.0);
    z0[0] = 1.0;
    z1[n - 1] = 1.0;
    lu.solve(z0.data());
    lu.solve(z1.data());
    const double c00 = 1.0 + p * z0[n - 1], c01 = p * z1[n - 1];
    const double c10 = q * z0[0], c11 = 1.0 + q * z1[0];
    const double det = c00 * c11 - c01 * c10;
    const double cnorm = std::max({std::abs(c00), std::abs(c01), std::abs(c10), std::abs(c11), 1.0});
    if (!std::isfinite(det) || std::abs(det) <= kEps * kEps * cnorm * cnorm)
        throw SingularShift("capacitance matrix of the cyclic correction is singular");
    const double w0 = p * y[n - 1], w1 = q * y[0];
    const double s0 = (c11 * w0 - c01 * w1) / det;
    const double s1 = (c00 * w1 - c10 * w0) / det;
    for (std::size_t i = 0; i < n; ++i) y[i] -= s0 * z0[i] + s1 * z1[i];
    return y;
}

double norm2(const std::vector<double>& v) { return std::sqrt(kernels::dot(v.data(), v.data(), v.size())); }

void normalize(std::vector<double>& v) {
    const double nv = norm2(v);
    if (!(nv > 0.0) || !std::isfinite(nv)) throw NoConvergence("iterate collapsed to zero or overflowed");
    kernels::scal(1.0 / nv, v.data(), v.size());
}

// Classical Gram-Schmidt, applied twice.
void orthogonalize(std::vector<double>& v, const std::vector<std::vector<double>>& basis) {
    for (int pass = 0; pass < 2; ++pass)
        for (const auto& q : basis) {
            const double c = kernels::dot(q.data(), v.data(), v.size());
            kernels::axpy(-c, q.data(), v.data(), v.size());
        }
}

// Smallest eigenvalue index j (0-based): inf{x : count(x) > j}.
double bisect(const SymTridiag& T, int j, double lo, double hi) {
    for (int it = 0; it < 256; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (sturm_count(T, mid) > j)
            hi = mid;
        else
            lo = mid;
        if (hi - lo <= 2.0 * kEps * std::max(std::abs(lo), std::abs(hi))) break;
    }
    return 0.5 * (lo + hi);
}

std::vector<EigenPair> acyclic_lowest(const SymTridiag& T, int k, double tol) {
    const std::size_t n = T.n();
    const double scale = T.scale();
    auto [glo, ghi] = T.gershgorin();
    glo -= kEps * scale;
    ghi += kEps * scale;

    // one extra value (when available) bounds the gap of the last requested one
    const int kv = std::min<int>(k + 1, static_cast<int>(n));
    std::vector<double> vals(kv);
    double lo = glo;
    for (int j = 0; j < kv; ++j) {
        vals[j] = bisect(T, j, lo, ghi);
        lo = std::max(glo, vals[j] - 4.0 * kEps * scale);
    }

    const double cluster_tol = 1e-10 * scale;
    const double group_tol = 1e-3 * scale;  // reorthogonalize within this window
    std::vector<double> lower(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) lower[i] = T.off[i - 1];
    std::vector<EigenPair> out;
    out.reserve(k);
    std::vector<std::vector<double>> group;
    for (int j = 0; j < k; ++j) {
        if (j > 0 && vals[j] - vals[j - 1] > group_tol) group.clear();
        // distance to the nearest distinct neighbour
        double gap = std::numeric_limits<double>::infinity();
        for (int i = j - 1; i >= 0; --i)
            if (vals[j] - vals[i] > cluster_tol) {
                gap = vals[j] - vals[i];
                break;
            }
        for (int i = j + 1; i < kv; ++i)
            if (vals[i] - vals[j] > cluster_tol) {
                gap = std::min(gap, vals[i] - vals[j]);
                break;
            }
        double delta = std::min(1e-10 * scale, 1e-3 * gap);
        delta = std::max(delta, 64.0 * kEps * scale);
        const double sigma = vals[j] - delta;

        TriLU lu(lower.data(), T.diag.data(), T.off.data(), n, sigma, scale);
        std::vector<double> v = start_vector(n);
        // distinct start for later members of a degenerate group
        if (!group.empty())
            for (std::size_t i = 0; i < n; ++i) v[i] += 0.5 * std::sin(0.7 * double(i + 1) * double(group.size()));
        orthogonalize(v, group);
        normalize(v);
        double lambda = vals[j], res = 0.0, prev = std::numeric_limits<double>::infinity();
        bool ok = false;
        // sweep until the residual reaches its rounding floor
        for (int sweep = 0; sweep < kInverseSweeps; ++sweep) {
            lu.solve(v.data());
            orthogonalize(v, group);
            normalize(v);
            std::vector<double> tv = T.apply(v);
            lambda = kernels::dot(v.data(), tv.data(), n);
            kernels::axpy(-lambda, v.data(), tv.data(), n);
            res = norm2(tv);
            ok = res <= tol * scale;
            if (ok && sweep >= 1 && res > 0.5 * prev) break;
            prev = res;
        }
        if (!ok)
            throw NoConvergence("inverse iteration for eigenvalue " + std::to_string(j) + " residual " +
                                std::to_string(res));
        // Fix the sign: largest-magnitude entry positive.
        std::size_t imax = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
        if (v[imax] < 0) kernels::scal(-1.0, v.data(), n);
        group.push_back(v);
        out.push_back({vals[j], std::move(v), res});
    }
    return out;
}

// One shift-invert Lanczos run deflated against `locked`. Returns up to
// `want` converged Ritz pairs of T (eigenvalues of T, ascending).
std::vector<EigenPair> lanczos_run(const SymTridiag& T, double sigma, int want,
                                   const std::vector<std::vector<double>>& locked, double tol,
                                   int budget) {
    const std::size_t n = T.n();
    const double scale = T.scale();
    const double p = *T.corner;
    std::vector<double> lower(n, 0.0), upper(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        upper[i] = T.off[i];
        lower[i + 1] = T.off[i];
    }
    auto op = [&](const std::vector<double>& x) {
        return cyclic_solve(lower, T.diag, upper, p, p, sigma, scale, x);
    };

    const int free_dim = static_cast<int>(n) - static_cast<int>(locked.size());
    const int max_steps = std::min(budget, free_dim);
    if (max_steps <= 0) return {};

    std::vector<std::vector<double>> Q;
    std::vector<double> alpha, beta;
    std::vector<double> q = start_vector(n);
    // perturb per deflation level so the start is not in the locked span
    for (std::size_t i = 0; i < n; ++i) q[i] += 0.25 * std::cos(1.3 * double(i) * double(locked.size() + 1));
    orthogonalize(q, locked);
    normalize(q);

    std::vector<EigenPair> result;
    for (int m = 1; m <= max_steps; ++m) {
        Q.push_back(q);
        std::vector<double> w = op(q);
        const double a = kernels::dot(q.data(), w.data(), n);
        alpha.push_back(a);
        orthogonalize(w, locked);
        orthogonalize(w, Q);
        const double b = norm2(w);
        const bool exhausted = !(b > 1e-14 * std::abs(alpha[0]) + 1e-300) || m == max_steps;

        const bool check = exhausted || m >= want + 8 || (m % 10 == 0);
        if (check) {
            SymTridiag Tm(alpha, beta);
            const int mm = static_cast<int>(alpha.size());
            std::vector<EigenPair> ritz = mm == 1 ? std::vector<EigenPair>{{alpha[0], {1.0}, 0.0}}
                                                  : acyclic_lowest(Tm, mm, 1e-10);
            // Largest theta of the inverse operator = lowest lambda of T.
            std::reverse(ritz.begin(), ritz.end());
            int conv = 0;
            for (int i = 0; i < std::min(want, mm); ++i) {
                const double theta = ritz[i].value;
                const double est = exhausted ? 0.0 : b * std::abs(ritz[i].vector.back());
                if (theta > 0 && est <= 1e-13 * theta)
                    ++conv;
                else
                    break;
            }
            if (conv >= std::min(want, mm) || exhausted) {
                for (int i = 0; i < conv; ++i) {
                    std::vector<double> x(n, 0.0);
                    for (int j = 0; j < mm; ++j) kernels::axpy(ritz[i].vector[j], Q[j].data(), x.data(), n);
                    orthogonalize(x, locked);
                    normalize(x);
                    std::vector<double> tx = T.apply(x);
                    const double lam = kernels::dot(x.data(), tx.data(), n);
                    kernels::axpy(-lam, x.data(), tx.data(), n);
                    const double res = norm2(tx);
                    if (res > tol * scale) continue;
                    result.push_back({lam, std::move(x), res});
                }
                if (!result.empty() || exhausted) break;
            }
        }
        if (exhausted) break;
        beta.push_back(b);
        kernels::scal(1.0 / b, w.data(), n);
        q = std::move(w);
    }
    std::sort(result.begin(), result.end(), [](const EigenPair& l, const EigenPair& r) { return l.value < r.value; });
    return result;
}

std::vector<EigenPair> cyclic_lowest(const SymTridiag& T, int k, double tol) {
    const std::size_t n = T.n();
    const double sigma = T.gershgorin().first - 1.0;
    std::vector<EigenPair> found = lanczos_run(T, sigma, k, {}, tol, kLanczosSteps);
    if (found.empty()) throw NoConvergence("shift-invert Lanczos found no converged Ritz pair");
    if (static_cast<int>(found.size()) > k) found.resize(k);

    // Deflated restarts: pick up missing (e.g. degenerate) eigenvalues until a
    // deflated run finds nothing below the current k-th value.
    for (int round = 0; round < 4 * k + 8; ++round) {
        std::vector<std::vector<double>> locked;
        for (const auto& e : found) locked.push_back(e.vector);
        if (locked.size() >= n) break;
        const int need = k - static_cast<int>(found.size());
        std::vector<EigenPair> extra = lanczos_run(T, sigma, std::max(need, 1), locked, tol, kLanczosSteps);
        if (extra.empty()) {
            if (need > 0) throw NoConvergence("deflated Lanczos restart failed to converge");
            break;
        }
        bool added = false;
        for (auto& e : extra) {
            if (static_cast<int>(found.size()) < k || e.value < found.back().value) {
                found.push_back(std::move(e));
                std::sort(found.begin(), found.end(),
                          [](const EigenPair& l, const EigenPair& r) { return l.value < r.value; });
                if (static_cast<int>(found.size()) > k) found.resize(k);
                added = true;
            }
        }
        if (!added && static_cast<int>(found.size()) >= k) break;
    }
    if (static_cast<int>(found.size()) < k) throw NoConvergence("Lanczos returned fewer pairs than requested");
    for (auto& e : found) {
        std::size_t imax = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (std::abs(e.vector[i]) > std::abs(e.vector[imax])) imax = i;
        if (e.vector[imax] < 0) kernels::scal(-1.0, e.vector.data(), n);
    }
    return found;
}

}  // namespace

SymTridiag::SymTridiag(std::vector<double> d, std::vector<double> e, std::optional<double> c)
    : diag(std::move(d)), off(std::move(e)), corner(c) {
    if (diag.empty()) throw DegenerateInput("tridiagonal matrix must have n >= 1");
    if (off.size() + 1 != diag.size()) throw DegenerateInput("offdiag must have n-1 entries");
    if (corner && diag.size() < 3) {
        // n = 2: the corner coincides with the off-diagonal position
        if (diag.size() == 2) off[0] += *corner;
        corner.reset();
    }
}

double SymTridiag::scale() const {
    double md = 0, me = 0;
    for (double d : diag) md = std::max(md, std::abs(d));
    for (double e : off) me = std::max(me, std::abs(e));
    return std::max(1.0, md + 2 * me + 2 * std::abs(corner.value_or(0.0)));
}

std::pair<double, double> SymTridiag::gershgorin() const {
    const std::size_t n = diag.size();
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    const double c = std::abs(corner.value_or(0.0));
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0;
        if (i > 0) r += std::abs(off[i - 1]);
        if (i + 1 < n) r += std::abs(off[i]);
        if (i == 0 || i + 1 == n) r += c;
        lo = std::min(lo, diag[i] - r);
        hi = std::max(hi, diag[i] + r);
    }
    return {lo, hi};
}

void SymTridiag::apply(const double* x, double* y) const {
    kernels::tridiag_matvec(diag.data(), off.data(), corner.value_or(0.0), x, y, diag.size());
}

std::vector<double> SymTridiag::apply(const std::vector<double>& x) const {
    std::vector<double> y(x.size());
    apply(x.data(), y.data());
    return y;
}

int sturm_count(const SymTridiag& T, double lambda) {
    if (T.cyclic()) throw CornerPresent("sturm_count requires an acyclic matrix");
    const std::size_t n = T.n();
    const double pivmin = std::numeric_limits<double>::min() / kEps;
    int count = 0;
    double d = T.diag[0] - lambda;
    if (d == 0.0) d = pivmin;
    if (d < 0) ++count;
    for (std::size_t i = 1; i < n; ++i) {
        d = (T.diag[i] - lambda) - T.off[i - 1] * (T.off[i - 1] / d);
        if (std::abs(d) < pivmin) d = (d < 0) ? -pivmin : pivmin;
        if (d < 0) ++count;
    }
    return count;
}

std::vector<EigenPair> eigs_lowest(const SymTridiag& T, int k, double tol) {
    if (k < 1 || static_cast<std::size_t>(k) > T.n())
        throw DegenerateInput("requested " + std::to_string(k) + " eigenpairs of an n=" + std::to_string(T.n()) +
                              " matrix");
    if (!(tol > 0)) throw DegenerateInput("tolerance must be positive");
    if (T.n() == 1) return {{T.diag[0], {1.0}, 0.0}};
    return T.cyclic() ? cyclic_lowest(T, k, tol) : acyclic_lowest(T, k, tol);
}

std::vector<double> solve_shifted(const SymTridiag& T, double sigma, const std::vector<double>& rhs) {
    const std::size_t n = T.n();
    if (rhs.size() != n) throw DegenerateInput("rhs length mismatch");
    std::vector<double> lower(n, 0.0), upper(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        upper[i] = T.off[i];
        lower[i + 1] = T.off[i];
    }
    const double c = T.corner.value_or(0.0);
    return cyclic_solve(lower, T.diag, upper, c, c, sigma, T.scale(), rhs);
}

double GenTridiag::scale() const {
    double s = 0;
    for (std::size_t i = 0; i < diag.size(); ++i)
        s = std::max(s, std::abs(lower[i]) + std::abs(diag[i]) + std::abs(upper[i]));
    return std::max(1.0, s);
}

std::vector<double> GenTridiag::apply(const std::vector<double>& x) const {
    const std::size_t n = diag.size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = diag[i] * x[i];
        if (i > 0)
            s += lower[i] * x[i - 1];
        else if (cyclic)
            s += lower[0] * x[n - 1];
        if (i + 1 < n)
            s += upper[i] * x[i + 1];
        else if (cyclic)
            s += upper[n - 1] * x[0];
        y[i] = s;
    }
    return y;
}

std::vector<double> solve_general(const GenTridiag& G, double sigma, const std::vector<double>& rhs) {
    const std::size_t n = G.n();
    if (n < 3 || G.lower.size() != n || G.upper.size() != n || rhs.size() != n)
        throw DegenerateInput("general tridiagonal solve needs n >= 3 and consistent lengths");
    const double p = G.cyclic ? G.lower[0] : 0.0;
    const double q = G.cyclic ? G.upper[n - 1] : 0.0;
    return cyclic_solve(G.lower, G.diag, G.upper, p, q, sigma, G.scale(), rhs);
}

std::vector<double> start_vector(std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.25 * double((i * 7919u + 13u) % 17u) / 17.0;
    const double s = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    for (double& x : v) x /= s;
    return v;
}

}  // namespace wittenlab
