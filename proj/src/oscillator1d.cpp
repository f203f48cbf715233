#include "wittenlab/oscillator1d.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wittenlab/constants.hpp"
#include "wittenlab/errors.hpp"

namespace wittenlab {

namespace {

constexpr int kMaxGrid = 1 << 20;

double max_rel_diff(const std::vector<double>& a, const std::vector<double>& b, double unit) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]) / std::max(std::abs(b[i]), unit));
    return m;
}

std::vector<double> richardson(const std::vector<double>& coarse, const std::vector<double>& fine) {
    std::vector<double> r(fine.size());
    for (std::size_t i = 0; i < fine.size(); ++i) r[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
    return r;
}

}  // namespace

Model1D Model1D::harmonic(double t, int shift_sign) {
    if (!(t > 0)) throw InputError("harmonic model needs t > 0");
    Model1D m;
    m.kind = Kind::Harmonic;
    m.t = t;
    m.sign = shift_sign >= 0 ? 1 : -1;
    return m;
}

Model1D Model1D::anharmonic(double a, double t, int form_sign) {
    if (!(t > 0) || a == 0.0) throw InputError("anharmonic model needs a != 0 and t > 0");
    Model1D m;
    m.kind = Kind::Anharmonic;
    m.t = t;
    m.a = a;
    m.sign = form_sign >= 0 ? 1 : -1;
    return m;
}

double Model1D::potential(double x) const {
    if (kind == Kind::Harmonic) return 4.0 * t * t * x * x + sign * 2.0 * t;
    const double at = a * t;
    return 9.0 * at * at * x * x * x * x + sign * 6.0 * at * x;
}

double Model1D::unit() const {
    return kind == Kind::Harmonic ? 4.0 * t : std::pow(std::abs(a * t), 2.0 / 3.0);
}

double Model1D::harmonic_level(int m) const { return 2.0 * t * (2.0 * m + 1.0) + sign * 2.0 * t; }

std::vector<double> Spectrum1D::grid() const {
    std::vector<double> x(n);
    const double h = 2.0 * L / (n + 1);
    for (int i = 0; i < n; ++i) x[i] = -L + (i + 1) * h;
    return x;
}

double auto_domain(const Model1D& m, int k) {
    if (m.kind == Model1D::Kind::Anharmonic)
        return 8.0 * std::pow(std::abs(m.a * m.t), -1.0 / 3.0) * std::max(1.0, std::cbrt(k / 2.0));
    const double top = 4.0 * m.t * (k + 1);
    return std::sqrt(50.0 * top) / (2.0 * m.t);
}

SymTridiag discretize(const Model1D& m, double L, int n) {
    if (!(L > 0) || n < 16) throw InputError("discretize needs L > 0 and n >= 16");
    const double h = 2.0 * L / (n + 1);
    const double s = 1.0 / (h * h);
    std::vector<double> d(n), e(n - 1, -s);
    for (int i = 0; i < n; ++i) d[i] = 2.0 * s + m.potential(-L + (i + 1) * h);
    return SymTridiag(std::move(d), std::move(e));
}

GridSpectrum grid_spectrum(const Model1D& m, double L, int n, int k) {
    const SymTridiag T = discretize(m, L, n);
    auto pairs = eigs_lowest(T, k, 1e-10);
    const double h = 2.0 * L / (n + 1);
    const int outer = std::max(1, n / 20);
    GridSpectrum out;
    for (auto& p : pairs) {
        std::vector<double>& v = p.vector;
        double kin = 0, pot = 0, nrm = 0;
        for (int i = 0; i <= n; ++i) {
            const double left = i > 0 ? v[i - 1] : 0.0, right = i < n ? v[i] : 0.0;
            kin += (right - left) * (right - left);
        }
        for (int i = 0; i < n; ++i) {
            pot += m.potential(-L + (i + 1) * h) * v[i] * v[i];
            nrm += v[i] * v[i];
        }
        out.values.push_back((kin / (h * h) + pot) / nrm);
        const double sc = 1.0 / std::sqrt(nrm * h);
        for (double& x : v) x *= sc;
        double mass = 0;
        for (int i = 0; i < outer; ++i) mass += (v[i] * v[i] + v[n - 1 - i] * v[n - 1 - i]) * h;
        if (mass > 1e-8)
            throw DomainTooSmall("boundary mass " + std::to_string(mass) + " at L = " + std::to_string(L));
        out.vectors.push_back(std::move(v));
    }
    return out;
}

Spectrum1D spectrum(const Model1D& m, int k, double tol, int n0, double L) {
    if (k < 1) throw InputError("spectrum needs k >= 1");
    if (L <= 0) L = auto_domain(m, k);
    const double unit = m.unit();
    int n = n0;
    GridSpectrum g1 = grid_spectrum(m, L, n, k);
    n = 2 * n + 1;
    GridSpectrum g2 = grid_spectrum(m, L, n, k);
    std::vector<double> r1 = richardson(g1.values, g2.values);
    while (true) {
        const int nn = 2 * n + 1;
        if (nn > kMaxGrid) throw NoConvergence("grid refinement cap 2^20 reached");
        GridSpectrum g3 = grid_spectrum(m, L, nn, k);
        std::vector<double> r2 = richardson(g2.values, g3.values);
        n = nn;
        if (max_rel_diff(r2, r1, unit) <= tol) {
            Spectrum1D s;
            s.model = m;
            s.L = L;
            s.n = n;
            s.values = r2;
            s.raw = g3.values;
            s.vectors = std::move(g3.vectors);
            if (m.kind == Model1D::Kind::Anharmonic) {
                if (const Constants* c = try_constants()) {
                    for (int i = 0; i < k && i < static_cast<int>(c->e.size()); ++i) {
                        const double ref = c->e[i] * unit;
                        if (std::abs(r2[i] - ref) > std::max(tol, 1e-9) * ref)
                            throw NoConvergence("level " + std::to_string(i + 1) +
                                                " disagrees with the cached e table");
                    }
                }
            }
            return s;
        }
        r1 = std::move(r2);
        g2 = std::move(g3);
    }
}

ReflectionReport verify_reflection(double a, double t, int k) {
    const Model1D mp = Model1D::anharmonic(a, t, +1), mm = Model1D::anharmonic(a, t, -1);
    const Spectrum1D sp = spectrum(mp, k), sm = spectrum(mm, k);
    ReflectionReport r;
    for (int i = 0; i < k; ++i) {
        r.spectral = std::max(r.spectral, std::abs(sp.values[i] - sm.values[i]) / std::abs(sm.values[i]));
        const auto& vp = sp.vectors[i];
        const auto& vm = sm.vectors[i];
        const int n = static_cast<int>(vp.size());
        double dplus = 0, dminus = 0;
        for (int j = 0; j < n; ++j) {
            dplus = std::max(dplus, std::abs(vp[j] - vm[n - 1 - j]));
            dminus = std::max(dminus, std::abs(vp[j] + vm[n - 1 - j]));
        }
        r.vector = std::max(r.vector, std::min(dplus, dminus));
    }
    return r;
}

GroundState ground_state_properties(const Model1D& m, int n0) {
    if (m.kind != Model1D::Kind::Anharmonic || m.sign != -1)
        throw InputError("ground_state_properties expects P(at), i.e. an anharmonic model with form_sign -1");
    if (n0 % 2 == 0) throw InputError("ground_state_properties needs an odd grid so x = 0 is a node");
    const Spectrum1D s = spectrum(m, 2, 1e-10, n0);
    GroundState g;
    g.gap_ratio = (s.values[1] - s.values[0]) / s.values[0];
    std::vector<double> v = s.vectors[0];
    const int n = static_cast<int>(v.size());
    double sum = 0;
    for (double x : v) sum += x;
    if (sum < 0)
        for (double& x : v) x = -x;
    g.min_entry = *std::min_element(v.begin(), v.end());
    if (!(g.min_entry > 0))
        throw PositivityViolation("ground vector has a non-positive entry: " + std::to_string(g.min_entry));
    // node value at x = 0, extrapolated from the two finest grids
    const double scale = std::pow(std::abs(m.a * m.t), 1.0 / 6.0);
    const int p = (n - 1) / 2;
    const GridSpectrum coarse = grid_spectrum(m, s.L, p, 1);
    const double fine0 = v[(n - 1) / 2];
    double c0 = coarse.vectors[0][(p - 1) / 2];
    if (c0 < 0) c0 = -c0;
    g.xi1_at_zero = (4.0 * fine0 - c0) / 3.0 / scale;
    return g;
}

double verify_scaling(const std::vector<double>& t_list, int k) {
    if (t_list.empty()) throw InputError("verify_scaling needs a nonempty t list");
    const Spectrum1D base = spectrum(Model1D::anharmonic(1.0, 1.0, -1), k);
    double worst = 0;
    for (double t : t_list) {
        const Spectrum1D s = spectrum(Model1D::anharmonic(1.0, t, -1), k);
        const double f = std::pow(t, 2.0 / 3.0);
        for (int m = 0; m < k; ++m)
            worst = std::max(worst, std::abs(s.values[m] - f * base.values[m]) / (f * base.values[m]));
    }
    return worst;
}

}  // namespace wittenlab
