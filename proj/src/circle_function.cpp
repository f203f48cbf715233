#include "wittenlab/circle_function.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <boost/math/tools/toms748_solve.hpp>

#include "wittenlab/errors.hpp"

namespace wittenlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap(double th) {
    double r = std::fmod(th, kTwoPi);
    if (r < 0) r += kTwoPi;
    if (r >= kTwoPi) r -= kTwoPi;
    return r;
}

double angular_distance(double a, double b) {
    double d = std::fabs(wrap(a) - wrap(b));
    return std::min(d, kTwoPi - d);
}

using Laurent = std::vector<std::complex<double>>;  // coefficient of zeta^(j - deg)

// multiply by 2 sin((theta - z)/2) = -i e^{-iz/2} zeta + i e^{iz/2} zeta^{-1}, zeta = e^{i theta/2}
Laurent times_sine(const Laurent& P, double z) {
    const std::complex<double> I(0.0, 1.0);
    std::complex<double> up = -I * std::exp(-I * (z / 2)), dn = I * std::exp(I * (z / 2));
    Laurent R(P.size() + 2, 0.0);
    for (std::size_t j = 0; j < P.size(); ++j) {
        R[j + 2] += P[j] * up;
        R[j] += P[j] * dn;
    }
    return R;
}

struct Expansion {
    std::vector<double> p, q;  // k = 1..N at index k-1
    double mean = 0.0;
};

Expansion expand(const std::vector<double>& simple, const std::vector<double>& dbl) {
    Laurent P{1.0};
    for (double z : simple) P = times_sine(P, z);
    for (double z : dbl) P = times_sine(times_sine(P, z), z);
    // F sine factors: powers of zeta run -F..F, index j <-> power j - F; zeta^{2k} = e^{ik theta}
    const int F = (static_cast<int>(P.size()) - 1) / 2;
    const int N = F / 2;
    Expansion e;
    e.mean = P[F].real();
    for (int k = 1; k <= N; ++k) {
        std::complex<double> c = P[F + 2 * k];
        e.p.push_back(2.0 * c.real());
        e.q.push_back(-2.0 * c.imag());
    }
    return e;
}

}  // namespace

CircleFunction::CircleFunction(std::vector<double> p, std::vector<double> q, double scale,
                               double offset)
    : p_(std::move(p)), q_(std::move(q)), scale_(scale), offset_(offset) {}

double CircleFunction::value(double th) const {
    double s = 0.0;
    for (std::size_t i = 0; i < p_.size(); ++i) {
        double k = static_cast<double>(i + 1);
        s += (p_[i] * std::sin(k * th) - q_[i] * std::cos(k * th)) / k;
    }
    return scale_ * s + offset_;
}

double CircleFunction::d1(double th) const {
    double s = 0.0;
    for (std::size_t i = 0; i < p_.size(); ++i) {
        double k = static_cast<double>(i + 1);
        s += p_[i] * std::cos(k * th) + q_[i] * std::sin(k * th);
    }
    return scale_ * s;
}

double CircleFunction::d2(double th) const {
    double s = 0.0;
    for (std::size_t i = 0; i < p_.size(); ++i) {
        double k = static_cast<double>(i + 1);
        s += k * (-p_[i] * std::sin(k * th) + q_[i] * std::cos(k * th));
    }
    return scale_ * s;
}

double CircleFunction::d3(double th) const {
    double s = 0.0;
    for (std::size_t i = 0; i < p_.size(); ++i) {
        double k = static_cast<double>(i + 1);
        s += -k * k * (p_[i] * std::cos(k * th) + q_[i] * std::sin(k * th));
    }
    return scale_ * s;
}

void CircleFunction::classify() {
    critical_.clear();
    // f' normalized by its sup so the 1e-9 thresholds are scale free
    double sup = 0.0;
    for (int i = 0; i < 720; ++i) sup = std::max(sup, std::fabs(d1(kTwoPi * i / 720.0)));
    if (sup == 0.0) throw DegenerateInput("f' vanishes identically");
    auto add = [&](double th, bool dbl) {
        CriticalPoint c;
        c.theta = wrap(th);
        c.f_value = value(c.theta);
        double f2 = d2(c.theta), f3 = d3(c.theta);
        if (!dbl) {
            if (std::fabs(f2) < 1e-9 * sup) {
                if (std::fabs(f3) < 1e-9 * sup)
                    throw DegenerateClassification("zero at theta=" + std::to_string(c.theta) +
                                                   " has f'' and f''' below threshold");
                throw DegenerateClassification("simple zero with vanishing f'' at theta=" +
                                               std::to_string(c.theta));
            }
            c.kind = f2 > 0 ? CriticalPoint::Kind::Min : CriticalPoint::Kind::Max;
            c.curvature = 0.5 * f2;
        } else {
            if (std::fabs(f3) < 1e-9 * sup)
                throw DegenerateClassification("double zero with vanishing f''' at theta=" +
                                               std::to_string(c.theta));
            c.kind = CriticalPoint::Kind::BirthDeath;
            c.a = f3 / 6.0;
        }
        critical_.push_back(c);
    };
    for (double z : simple_zeros) add(z, false);
    for (double z : double_zeros) add(z, true);
    std::sort(critical_.begin(), critical_.end(),
              [](const CriticalPoint& a, const CriticalPoint& b) { return a.theta < b.theta; });
    int nmin = 0, nmax = 0, nbd = 0;
    for (auto& c : critical_) {
        switch (c.kind) {
            case CriticalPoint::Kind::Min: c.label = "min" + std::to_string(nmin++); break;
            case CriticalPoint::Kind::Max: c.label = "max" + std::to_string(nmax++); break;
            case CriticalPoint::Kind::BirthDeath: c.label = "bd" + std::to_string(nbd++); break;
        }
    }
}

std::vector<CriticalPoint> CircleFunction::minima() const {
    std::vector<CriticalPoint> r;
    for (auto& c : critical_)
        if (c.kind == CriticalPoint::Kind::Min) r.push_back(c);
    return r;
}

std::vector<CriticalPoint> CircleFunction::maxima() const {
    std::vector<CriticalPoint> r;
    for (auto& c : critical_)
        if (c.kind == CriticalPoint::Kind::Max) r.push_back(c);
    return r;
}

std::vector<CriticalPoint> CircleFunction::birth_deaths() const {
    std::vector<CriticalPoint> r;
    for (auto& c : critical_)
        if (c.is_bd()) r.push_back(c);
    return r;
}

const CriticalPoint& CircleFunction::by_label(const std::string& label) const {
    for (auto& c : critical_)
        if (c.label == label) return c;
    throw InputError("no critical point labeled " + label);
}

CircleFunction CircleFunction::affine(double alpha, double beta) const {
    if (!(alpha > 0)) throw DegenerateInput("affine rescale needs alpha > 0");
    CircleFunction g(p_, q_, scale_ * alpha, offset_ * alpha + beta);
    g.simple_zeros = simple_zeros;
    g.double_zeros = double_zeros;
    g.critical_ = critical_;
    for (auto& c : g.critical_) {
        c.f_value = alpha * c.f_value + beta;
        c.curvature *= alpha;
        c.a *= alpha;
    }
    return g;
}

double CircleFunction::min_value() const {
    double m = INFINITY;
    for (auto& c : critical_) m = std::min(m, c.f_value);
    return m;
}

double CircleFunction::max_value() const {
    double m = -INFINITY;
    for (auto& c : critical_) m = std::max(m, c.f_value);
    return m;
}

bool CircleFunction::self_indexed(double tol) const {
    for (auto& c : critical_) {
        if (c.kind == CriticalPoint::Kind::Min && std::fabs(c.f_value) > tol) return false;
        if (c.kind == CriticalPoint::Kind::Max && std::fabs(c.f_value - 1.0) > tol) return false;
        if (c.is_bd() && !(c.f_value > 0.0 && c.f_value < 1.0)) return false;
    }
    return true;
}

CircleFunction build_circle_function(const std::vector<double>& simple_zeros,
                                     const std::vector<double>& double_zeros) {
    const std::size_t total = simple_zeros.size() + 2 * double_zeros.size();
    if (total < 2 || total % 2 != 0)
        throw DegenerateInput("zero count (doubles counted twice) must be even and >= 2, got " +
                              std::to_string(total));
    std::vector<double> all;
    for (double z : simple_zeros) all.push_back(wrap(z));
    for (double z : double_zeros) all.push_back(wrap(z));
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j)
            if (angular_distance(all[i], all[j]) < 1e-9) throw DegenerateInput("zeros not distinct");

    std::vector<double> simple = simple_zeros;
    Expansion e = expand(simple, double_zeros);
    double sup = 0.0;
    for (double v : e.p) sup = std::max(sup, std::fabs(v));
    for (double v : e.q) sup = std::max(sup, std::fabs(v));
    sup = std::max(sup, std::fabs(e.mean));
    if (std::fabs(e.mean) > 1e-13 * sup) {
        if (simple.empty()) throw MeanZeroUnreachable("no simple zero available to move");
        // the last simple zero moves inside the gap between its angular neighbours
        const double z0 = wrap(simple.back());
        double lo = -kTwoPi, hi = kTwoPi;
        for (std::size_t i = 0; i < all.size(); ++i) {
            if (i == simple.size() - 1) continue;
            double d = wrap(all[i] - z0);  // in (0, 2pi)
            hi = std::min(hi, d);
            lo = std::max(lo, d - kTwoPi);
        }
        const double margin = 1e-6;
        double a = lo + margin, b = hi - margin;
        auto mean_at = [&](double s) {
            std::vector<double> trial = simple;
            trial.back() = z0 + s;
            return expand(trial, double_zeros).mean;
        };
        double fa = mean_at(a), fb = mean_at(b);
        if (fa * fb > 0)
            throw MeanZeroUnreachable("mean of f' keeps its sign across the allowed window");
        boost::uintmax_t iters = 200;
        auto r = boost::math::tools::toms748_solve(
            mean_at, a, b, fa, fb,
            [](double x, double y) { return std::fabs(x - y) < 1e-15; }, iters);
        double s = 0.5 * (r.first + r.second);
        simple.back() = wrap(z0 + s);
        e = expand(simple, double_zeros);
        if (std::fabs(e.mean) > 1e-11 * sup)
            throw MeanZeroUnreachable("root finding did not reach mean zero");
    }
    CircleFunction f(e.p, e.q, 1.0, 0.0);
    for (double z : simple) f.simple_zeros.push_back(wrap(z));
    for (double z : double_zeros) f.double_zeros.push_back(wrap(z));
    f.classify();
    return f;
}

CircleFunction affine_self_index(const CircleFunction& f) {
    auto mins = f.minima();
    auto maxs = f.maxima();
    if (mins.empty() || maxs.empty()) throw NotAffinelySelfIndexable("needs minima and maxima");
    const double span = f.max_value() - f.min_value();
    const double tol = 1e-9 * std::max(1.0, span);
    for (auto& c : mins)
        if (std::fabs(c.f_value - mins[0].f_value) > tol)
            throw NotAffinelySelfIndexable("minima have distinct values");
    for (auto& c : maxs)
        if (std::fabs(c.f_value - maxs[0].f_value) > tol)
            throw NotAffinelySelfIndexable("maxima have distinct values");
    const double lo = mins[0].f_value, hi = maxs[0].f_value;
    if (!(hi > lo)) throw NotAffinelySelfIndexable("max value not above min value");
    double alpha = 1.0 / (hi - lo);
    CircleFunction g = f.affine(alpha, -alpha * lo);
    for (auto& c : g.birth_deaths())
        if (!(c.f_value > 0.0 && c.f_value < 1.0))
            throw NotAffinelySelfIndexable("birth-death value outside (0,1)");
    return g;
}

CircleFunction normalize_range(const CircleFunction& f) {
    const double lo = f.min_value(), hi = f.max_value();
    if (!(hi > lo)) throw DegenerateInput("constant critical values");
    double alpha = 1.0 / (hi - lo);
    return f.affine(alpha, -alpha * lo);
}

ExampleSpec named_example(const std::string& name) {
    const double pi = std::numbers::pi;
    if (name == "A") return {"A", {pi / 3, -pi / 3}, {pi}, true};
    if (name == "B") return {"B", {0.0, 1.2, 2.4, 3.8}, {5.2}, false};
    // two birth-death points with well separated |a|
    if (name == "C") return {"C", {0.44, 1.97, 3.00, 6.03}, {1.06, 3.98}, false};
    throw InputError("unknown example '" + name + "' (known: A, B, C)");
}

CircleFunction make_function(const ExampleSpec& spec) {
    CircleFunction f = build_circle_function(spec.simple_zeros, spec.double_zeros);
    return spec.self_index ? affine_self_index(f) : normalize_range(f);
}

}  // namespace wittenlab
