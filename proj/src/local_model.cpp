#include "wittenlab/local_model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <queue>
#include <set>
#include <string>

#include "wittenlab/constants.hpp"
#include "wittenlab/errors.hpp"

namespace wittenlab {

namespace {

using Levels = std::vector<std::vector<double>>;  // per-axis ascending values

std::vector<double> axis_levels(const Model1D& op, int m) {
    if (op.kind == Model1D::Kind::Harmonic) {
        std::vector<double> v(m);
        for (int j = 0; j < m; ++j) v[j] = op.harmonic_level(j);
        return v;
    }
    return spectrum(op, m).values;
}

struct Node {
    double sum;
    std::vector<int> idx;
    bool operator>(const Node& o) const { return sum != o.sum ? sum > o.sum : idx > o.idx; }
};

SectorSpectrum merge_sums(const FormSector& sector, const Levels& levels, int m) {
    SectorSpectrum out;
    out.sector = sector;
    const std::size_t naxes = levels.size();
    std::priority_queue<Node, std::vector<Node>, std::greater<Node>> heap;
    std::set<std::vector<int>> seen;
    auto sum_of = [&](const std::vector<int>& idx) {
        double s = 0;
        for (std::size_t i = 0; i < naxes; ++i) s += levels[i][idx[i]];
        return s;
    };
    std::vector<int> zero(naxes, 0);
    heap.push({sum_of(zero), zero});
    seen.insert(zero);
    while (static_cast<int>(out.values.size()) < m && !heap.empty()) {
        Node top = heap.top();
        heap.pop();
        out.values.push_back(top.sum);
        out.quantum_numbers.push_back(top.idx);
        for (std::size_t i = 0; i < naxes; ++i) {
            if (top.idx[i] + 1 >= static_cast<int>(levels[i].size())) continue;
            std::vector<int> next = top.idx;
            ++next[i];
            if (seen.insert(next).second) heap.push({sum_of(next), next});
        }
    }
    return out;
}

Levels sector_levels(const CriticalPointModel& model, const FormSector& sector, double t, int m,
                     std::map<int, std::vector<double>>* anharmonic_cache) {
    Levels levels;
    for (int axis = 1; axis <= model.dim; ++axis) {
        const Model1D op = axis_operator(model, axis, sector.contains(axis), t);
        if (op.kind == Model1D::Kind::Anharmonic && anharmonic_cache) {
            auto it = anharmonic_cache->find(op.sign);
            if (it == anharmonic_cache->end()) it = anharmonic_cache->emplace(op.sign, axis_levels(op, m)).first;
            levels.push_back(it->second);
        } else {
            levels.push_back(axis_levels(op, m));
        }
    }
    return levels;
}

double interp(const std::vector<double>& x, const std::vector<double>& y, double xi) {
    if (xi <= x.front() || xi >= x.back()) return 0.0;
    const double h = x[1] - x[0];
    const double s = (xi - x.front()) / h;
    const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(s), x.size() - 2);
    const double w = s - double(i);
    return (1 - w) * y[i] + w * y[i + 1];
}

AxisProfile anharmonic_profile(double a, double t, int form_sign) {
    const Spectrum1D s = spectrum(Model1D::anharmonic(a, t, form_sign), 1);
    AxisProfile p;
    p.anharmonic = true;
    p.t = t;
    p.x = s.grid();
    p.values = s.vectors[0];
    double sum = 0;
    for (double v : p.values) sum += v;
    if (sum < 0)
        for (double& v : p.values) v = -v;
    return p;
}

// sum v^2 dx of one factor on its natural grid
double factor_norm2(const AxisProfile& p) {
    if (p.anharmonic) {
        const double h = p.x[1] - p.x[0];
        double s = 0;
        for (double v : p.values) s += v * v * h;
        return s;
    }
    const double L = 10.0 / std::sqrt(p.t);
    const int n = 4001;
    const double h = 2 * L / (n - 1);
    double s = 0;
    for (int i = 0; i < n; ++i) {
        const double v = p(-L + i * h);
        s += v * v * h;
    }
    return s;
}

// Rayleigh quotient of a product form on a tensor FD grid (n <= 2).
double tensor_rayleigh_on(const CriticalPointModel& model, const ProductForm& w, double t, int N) {
    const int n = model.dim;
    std::vector<Model1D> ops;
    std::vector<double> Ls;
    FormSector S{w.dx_axes};
    for (int axis = 1; axis <= n; ++axis) {
        ops.push_back(axis_operator(model, axis, S.contains(axis), t));
        Ls.push_back(w.factors[axis - 1].anharmonic ? w.factors[axis - 1].x.back() : 8.0 / std::sqrt(t));
    }
    std::vector<double> h(n);
    for (int i = 0; i < n; ++i) h[i] = 2 * Ls[i] / (N + 1);
    auto coord = [&](int axis, int i) { return -Ls[axis] + (i + 1) * h[axis]; };
    if (n == 1) {
        std::vector<double> psi(N);
        for (int i = 0; i < N; ++i) psi[i] = w.factors[0](coord(0, i));
        double kin = 0, pot = 0, nrm = 0;
        for (int i = 0; i <= N; ++i) {
            const double l = i > 0 ? psi[i - 1] : 0.0, r = i < N ? psi[i] : 0.0;
            kin += (r - l) * (r - l) / (h[0] * h[0]);
        }
        for (int i = 0; i < N; ++i) {
            pot += ops[0].potential(coord(0, i)) * psi[i] * psi[i];
            nrm += psi[i] * psi[i];
        }
        return (kin + pot) / nrm;
    }
    // n == 2: full two-dimensional sums
    std::vector<double> psi(std::size_t(N) * N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) psi[std::size_t(i) * N + j] = w.evaluate({coord(0, i), coord(1, j)});
    auto at = [&](int i, int j) {
        if (i < 0 || j < 0 || i >= N || j >= N) return 0.0;
        return psi[std::size_t(i) * N + j];
    };
    double num = 0, nrm = 0;
    for (int i = -1; i < N; ++i)
        for (int j = -1; j < N; ++j) {
            const double dx = at(i + 1, j) - at(i, j), dy = at(i, j + 1) - at(i, j);
            if (j >= 0) num += dx * dx / (h[0] * h[0]);
            if (i >= 0) num += dy * dy / (h[1] * h[1]);
            if (i >= 0 && j >= 0) {
                const double v = at(i, j);
                num += (ops[0].potential(coord(0, i)) + ops[1].potential(coord(1, j))) * v * v;
                nrm += v * v;
            }
        }
    return num / nrm;
}

// second-order grids, Richardson-combined
double tensor_rayleigh(const CriticalPointModel& model, const ProductForm& w, double t) {
    const int N = model.dim == 1 ? 2047 : 399;
    const double coarse = tensor_rayleigh_on(model, w, t, N);
    const double fine = tensor_rayleigh_on(model, w, t, 2 * N + 1);
    return (4.0 * fine - coarse) / 3.0;
}

}  // namespace

CriticalPointModel CriticalPointModel::nondegenerate(int k, int n) {
    if (n < 1 || k < 0 || k > n) throw InputError("nondegenerate model needs 0 <= k <= n, n >= 1");
    CriticalPointModel m;
    m.kind = Kind::NonDegenerate;
    m.index = k;
    m.dim = n;
    return m;
}

CriticalPointModel CriticalPointModel::birth_death(int k, int n, double a) {
    if (n < 1 || k < 0 || k > n - 1 || a == 0.0)
        throw InputError("birth-death model needs 0 <= k <= n-1 and a != 0");
    CriticalPointModel m;
    m.kind = Kind::BirthDeath;
    m.index = k;
    m.dim = n;
    m.a = a;
    return m;
}

bool FormSector::contains(int axis) const { return std::binary_search(axes.begin(), axes.end(), axis); }

Model1D axis_operator(const CriticalPointModel& model, int axis, bool in_S, double t) {
    if (axis < 1 || axis > model.dim) throw InputError("axis out of range");
    const int sigma = in_S ? 1 : -1;
    if (model.is_bd() && axis == model.dim) return Model1D::anharmonic(model.a, t, sigma);
    // descending directions carry -2t*sigma, ascending ones +2t*sigma
    return Model1D::harmonic(t, axis <= model.index ? -sigma : sigma);
}

SectorSpectrum sector_spectrum(const CriticalPointModel& model, const FormSector& sector, double t, int m) {
    if (m < 1) throw InputError("sector_spectrum needs m >= 1");
    for (int a : sector.axes)
        if (a < 1 || a > model.dim) throw InputError("sector axis out of range");
    return merge_sums(sector, sector_levels(model, sector, t, m, nullptr), m);
}

std::vector<FormSector> sectors_of_degree(int n, int d) {
    std::vector<FormSector> out;
    if (d < 0 || d > n) return out;
    std::vector<int> pick(d);
    for (int i = 0; i < d; ++i) pick[i] = i + 1;
    while (true) {
        out.push_back({pick});
        int i = d - 1;
        while (i >= 0 && pick[i] == n - d + i + 1) --i;
        if (i < 0) break;
        ++pick[i];
        for (int j = i + 1; j < d; ++j) pick[j] = pick[j - 1] + 1;
    }
    return out;
}

std::vector<TaggedValue> degree_spectrum(const CriticalPointModel& model, int d, double t, int m) {
    if (d < 0 || d > model.dim) throw InputError("degree out of range");
    std::map<int, std::vector<double>> cache;
    std::vector<TaggedValue> all;
    for (const FormSector& S : sectors_of_degree(model.dim, d)) {
        const SectorSpectrum sp = merge_sums(S, sector_levels(model, S, t, m, &cache), m);
        for (double v : sp.values) all.push_back({v, S});
    }
    std::stable_sort(all.begin(), all.end(), [](const TaggedValue& l, const TaggedValue& r) {
        return l.value != r.value ? l.value < r.value : l.sector.axes < r.sector.axes;
    });
    if (static_cast<int>(all.size()) > m) all.resize(m);
    return all;
}

double AxisProfile::operator()(double xi) const {
    if (anharmonic) return interp(x, values, xi);
    return std::pow(2.0 * t / std::numbers::pi, 0.25) * std::exp(-t * xi * xi);
}

double ProductForm::evaluate(const std::vector<double>& point) const {
    double v = 1.0;
    for (std::size_t i = 0; i < factors.size(); ++i) v *= factors[i](point[i]);
    return v;
}

EigenformPair lowest_eigenforms(const CriticalPointModel& model, double t) {
    if (!model.is_bd()) throw InputError("lowest_eigenforms expects a birth-death model");
    if (!(t > 0)) throw InputError("t must be positive");
    const int n = model.dim, k = model.index;
    EigenformPair out;
    for (int which = 0; which < 2; ++which) {
        ProductForm w;
        w.degree = k + which;
        for (int i = 1; i <= k; ++i) w.dx_axes.push_back(i);
        if (which == 1) w.dx_axes.push_back(n);
        for (int axis = 1; axis < n; ++axis) {
            AxisProfile g;
            g.t = t;
            w.factors.push_back(g);
        }
        // the dx_n factor flips the form sign, i.e. reflects the profile
        w.factors.push_back(anharmonic_profile(model.a, t, which == 1 ? +1 : -1));
        double norm2 = 1.0;
        for (const auto& f : w.factors) norm2 *= factor_norm2(f);
        (which == 0 ? out.norm_lower : out.norm_upper) = std::sqrt(norm2);
        (which == 0 ? out.lower : out.upper) = std::move(w);
    }
    out.value = constants().e[0] * std::pow(std::abs(model.a * t), 2.0 / 3.0);
    if (n <= 2) {
        out.rayleigh_lower = tensor_rayleigh(model, out.lower, t);
        out.rayleigh_upper = tensor_rayleigh(model, out.upper, t);
        for (double r : {out.rayleigh_lower, out.rayleigh_upper})
            if (std::abs(r - out.value) > 1e-4 * out.value)
                throw NoConvergence("tensor-grid Rayleigh quotient " + std::to_string(r) + " misses " +
                                    std::to_string(out.value));
    }
    return out;
}

}  // namespace wittenlab
