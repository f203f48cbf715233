#include "wittenlab/circle_lab.hpp"
#include "wittenlab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include <Eigen/Dense>

#include "wittenlab/constants.hpp"
#include "wittenlab/errors.hpp"
#include "wittenlab/oscillator1d.hpp"

namespace wittenlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double signed_diff(double th, double c) {
    double d = std::fmod(th - c, kTwoPi);
    if (d > std::numbers::pi) d -= kTwoPi;
    if (d <= -std::numbers::pi) d += kTwoPi;
    return d;
}

// 1 on [0, 1/2], 0 on [1, inf), smooth in between
double plateau(double s) {
    if (s <= 0.5) return 1.0;
    if (s >= 1.0) return 0.0;
    auto g = [](double x) { return x <= 0 ? 0.0 : std::exp(-1.0 / x); };
    double x = (1.0 - s) / 0.5;
    return g(x) / (g(x) + g(1.0 - x));
}

double pow23(double x) { return std::cbrt(x * x); }

}  // namespace

double choose_epsilon(const std::vector<double>& abs_a) {
    if (abs_a.empty()) return 1.0;
    const auto& C = constants();
    const double e1 = C.e.at(0), e2 = C.e.at(1);
    std::vector<double> b;
    for (double a : abs_a) {
        if (!(std::fabs(a) > 0)) throw InputError("birth-death coefficient must be nonzero");
        b.push_back(pow23(std::fabs(a)));
    }
    std::sort(b.begin(), b.end());
    for (std::size_t i = 0; i + 1 < b.size(); ++i)
        if (b[i + 1] - b[i] <= 1e-12 * b[i + 1])
            throw AssumptionViolated("birth-death points share the same |a|");
    if (!(e1 * b.back() < e2 * b.front()))
        throw AssumptionViolated("e1 |a_last|^{2/3} >= e2 |a_1|^{2/3}: large windows reach the very-large cluster");
    double m = 0.5 * e1 * b.front();
    for (std::size_t i = 0; i + 1 < b.size(); ++i) m = std::min(m, 0.5 * e1 * (b[i + 1] - b[i]));
    m = std::min(m, 0.5 * (e2 * b.front() - e1 * b.back()));
    return 0.9 * m;
}

double choose_epsilon(const CircleFunction& f) {
    std::vector<double> a;
    for (auto& c : f.birth_deaths()) a.push_back(c.a);
    return choose_epsilon(a);
}

ClusterReport classify_spectrum(const CircleFunction& f, int degree, double t,
                                const std::vector<double>& eigenvalues, double eps) {
    ClusterReport R;
    R.degree = degree;
    R.t = t;
    R.epsilon = eps;
    R.all = eigenvalues;
    std::sort(R.all.begin(), R.all.end());
    const double s = std::pow(t, 2.0 / 3.0);
    auto bds = f.birth_deaths();
    const double e1 = bds.empty() ? 0.0 : constants().e.at(0);
    const double e2 = bds.empty() ? 0.0 : constants().e.at(1);
    double vl_start = eps;
    if (!bds.empty()) {
        double amin = INFINITY;
        for (auto& c : bds) amin = std::min(amin, pow23(std::fabs(c.a)));
        vl_start = e2 * amin - eps;
    }
    std::map<std::string, int> hits;
    bool have_floor = false;
    std::ostringstream err;
    for (double lam : R.all) {
        double x = lam / s;
        if (x <= eps) {
            R.small.push_back(lam);
            continue;
        }
        bool placed = false;
        for (auto& c : bds) {
            double centre = e1 * pow23(std::fabs(c.a));
            if (std::fabs(x - centre) <= eps) {
                R.large.push_back({c.label, lam});
                ++hits[c.label];
                placed = true;
            }
        }
        if (placed) continue;
        if (x >= vl_start) {
            if (!have_floor) R.very_large_floor = lam;
            have_floor = true;
            continue;
        }
        err << " stray eigenvalue " << lam << " (t^{-2/3} units " << x << ") outside every window;";
    }
    const int m = degree == 0 ? static_cast<int>(f.minima().size()) : static_cast<int>(f.maxima().size());
    if (R.count_small() != m)
        err << " small cluster holds " << R.count_small() << " eigenvalues, expected " << m << ";";
    for (auto& c : bds)
        if (hits[c.label] != 1)
            err << " window of " << c.label << " holds " << hits[c.label] << " eigenvalues;";
    if (!have_floor) err << " no eigenvalue reached the very-large cluster;";
    if (!err.str().empty())
        throw ClusterOverlap("degree " + std::to_string(degree) + ", t=" + std::to_string(t) + ":" + err.str());
    return R;
}

CircleLab::CircleLab(CircleFunction f, double t, LabOptions opt)
    : f_(std::move(f)), t_(t), opt_(opt), eps_(choose_epsilon(f_)) {
    int n = opt_.n_grid > 0 ? opt_.n_grid : default_grid(t, opt_.n_min, opt_.n_factor);
    W_ = assemble_witten(f_, t, n, opt_.scheme);
}

const Gauge& CircleLab::gauge() const {
    if (!gauge_) gauge_ = std::make_unique<Gauge>(W_);
    return *gauge_;
}

int CircleLab::small_count(int degree) const {
    return static_cast<int>(degree == 0 ? f_.minima().size() : f_.maxima().size());
}

const std::vector<EigenPair>& CircleLab::eigenpairs(int degree) const {
    if (degree != 0 && degree != 1) throw InputError("degree must be 0 or 1");
    if (eig_[degree]) return *eig_[degree];
    const SymTridiag& D = degree == 0 ? W_.Delta0 : W_.Delta1;
    const int nbd = static_cast<int>(f_.birth_deaths().size());
    int k = small_count(degree) + std::max(opt_.extra_eigs, nbd + 2);
    // the top computed value must sit in the very-large cluster
    double vl = eps_;
    if (nbd > 0) {
        double amin = INFINITY;
        for (auto& c : f_.birth_deaths()) amin = std::min(amin, pow23(std::fabs(c.a)));
        vl = constants().e.at(1) * amin - eps_;
    }
    const double s = std::pow(t_, 2.0 / 3.0);
    for (;;) {
        auto pairs = eigs_lowest(D, std::min<int>(k, W_.n));
        if (pairs.back().value / s >= vl || k >= W_.n || k >= 200) {
            eig_[degree] = std::make_unique<std::vector<EigenPair>>(std::move(pairs));
            break;
        }
        k *= 2;
    }
    return *eig_[degree];
}

ClusterReport CircleLab::clusters(int degree) const {
    std::vector<double> v;
    for (auto& p : eigenpairs(degree)) v.push_back(p.value);
    return classify_spectrum(f_, degree, t_, v, eps_);
}

double CircleLab::supersymmetry_mismatch(int pairs) const {
    const auto& A = eigenpairs(0);
    const auto& B = eigenpairs(1);
    const int s0 = small_count(0), s1 = small_count(1);
    int avail = std::min<int>(static_cast<int>(A.size()) - s0, static_cast<int>(B.size()) - s1);
    if (avail < pairs) throw InputError("not enough eigenpairs for the supersymmetry check");
    double worst = 0.0;
    for (int j = 0; j < pairs; ++j) {
        double x = A[s0 + j].value, y = B[s1 + j].value;
        worst = std::max(worst, std::fabs(x - y) / std::max(std::fabs(x), std::fabs(y)));
    }
    return worst;
}

double CircleLab::chart_radius(const std::string& label) const {
    const auto& c = f_.by_label(label);
    double r = INFINITY;
    for (auto& o : f_.critical_points())
        if (o.label != label) r = std::min(r, std::fabs(signed_diff(o.theta, c.theta)));
    if (r == INFINITY) r = std::numbers::pi;
    return 0.5 * r;
}

std::vector<char> CircleLab::chart_mask(const std::string& label, int degree) const {
    const auto& c = f_.by_label(label);
    const double r = chart_radius(label);
    std::vector<char> m(W_.n);
    for (int i = 0; i < W_.n; ++i) {
        double th = degree == 0 ? W_.node(i) : W_.mid(i);
        m[i] = std::fabs(signed_diff(th, c.theta)) < r;
    }
    return m;
}

CircleLab::Bases CircleLab::bases() const {
    Bases B;
    const double sh = 1.0 / std::sqrt(W_.h);
    for (int k = 0; k < 2; ++k) {
        auto rep = clusters(k);
        const auto& pairs = eigenpairs(k);
        int idx = 0;
        for (; idx < rep.count_small(); ++idx) {
            auto v = pairs[idx].vector;
            for (double& x : v) x *= sh;
            B.small[k].push_back(std::move(v));
        }
        for (auto& L : rep.large) {
            // large values sit right after the small cluster, in ascending order
            auto it = std::find_if(pairs.begin(), pairs.end(), [&](const EigenPair& p) { return p.value == L.value; });
            auto v = it->vector;
            for (double& x : v) x *= sh;
            B.large[k][L.label] = std::move(v);
            B.large_value[k][L.label] = L.value;
        }
        // cross-cluster orthogonality in the h inner product
        std::vector<std::pair<std::string, const std::vector<double>*>> all;
        for (auto& v : B.small[k]) all.push_back({"small", &v});
        for (auto& [lab, v] : B.large[k]) all.push_back({lab, &v});
        for (std::size_t i = 0; i < all.size(); ++i)
            for (std::size_t j = i + 1; j < all.size(); ++j) {
                if (all[i].first == all[j].first) continue;
                double s = 0.0;
                for (int q = 0; q < W_.n; ++q) s += (*all[i].second)[q] * (*all[j].second)[q];
                B.cross_orthogonality = std::max(B.cross_orthogonality, std::fabs(s * W_.h));
            }
    }
    return B;
}

ScaledVector CircleLab::quasimode(const CriticalPoint& c, int degree) const {
    const int n = W_.n;
    const double r = chart_radius(c.label);
    std::vector<double> la(n, 0.0), sg(n, 0.0);
    std::vector<double> px, pv;  // sampled birth-death profile
    double ph = 0.0;
    if (c.is_bd()) {
        Model1D m = Model1D::anharmonic(c.a, t_, degree == 0 ? -1 : 1);
        double L = auto_domain(m, 1);
        auto gs = grid_spectrum(m, L, 2047, 1);
        pv = gs.vectors[0];
        double mx = *std::max_element(pv.begin(), pv.end()), mn = *std::min_element(pv.begin(), pv.end());
        if (std::fabs(mn) > std::fabs(mx))
            for (double& v : pv) v = -v;
        ph = 2.0 * L / (pv.size() + 1);
        px.resize(pv.size());
        for (std::size_t i = 0; i < pv.size(); ++i) px[i] = -L + (i + 1) * ph;
    }
    const double kappa = std::fabs(c.curvature);
    for (int i = 0; i < n; ++i) {
        double th = degree == 0 ? W_.node(i) : W_.mid(i);
        double d = signed_diff(th, c.theta);
        double chi = plateau(std::fabs(d) / r);
        if (chi == 0.0) continue;
        if (!c.is_bd()) {
            la[i] = std::log(chi) + 0.25 * std::log(2.0 * kappa * t_ / std::numbers::pi) - kappa * t_ * d * d;
            sg[i] = 1.0;
        } else {
            if (d <= px.front() || d >= px.back()) continue;
            std::size_t j = static_cast<std::size_t>((d - px.front()) / ph);
            j = std::min(j, px.size() - 2);
            double w = (d - px[j]) / ph;
            double v = (1 - w) * pv[j] + w * pv[j + 1];
            if (v <= 0.0) continue;
            la[i] = std::log(chi) + std::log(v);
            sg[i] = 1.0;
        }
    }
    return gauge().normalized(gauge().from_log_physical(la, sg, degree), degree);
}

const LocalizedVector& LocalizedBasis::get(const std::string& label, int degree) const {
    for (auto& v : vectors)
        if (v.label == label && v.degree == degree) return v;
    throw InputError("no localized vector " + label + " in degree " + std::to_string(degree));
}

const LocalizedBasis& CircleLab::localized() const {
    if (loc_) return *loc_;
    const Gauge& g = gauge();
    auto out = std::make_unique<LocalizedBasis>();
    for (int k = 0; k < 2; ++k) {
        auto rep = clusters(k);
        // small cluster: the filter delta^6 (G + delta)^{-6} only fixes the span;
        // H is formed from inner products so filter amplitudes never enter
        auto crit = k == 0 ? f_.minima() : f_.maxima();
        const double gap = eigenpairs(k).at(rep.count_small()).value;
        const double delta = 1e-3 * gap;
        const int m = static_cast<int>(crit.size());
        std::vector<ScaledVector> q, y;
        for (auto& c : crit) {
            q.push_back(quasimode(c, k));
            ScaledVector z = q.back();
            for (int it = 0; it < 6; ++it) z = g.normalized(g.resolvent(z, k, -delta), k);
            y.push_back(std::move(z));
        }
        auto sym_pow = [](const Eigen::MatrixXd& A, double p) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
            Eigen::VectorXd d = es.eigenvalues().array().pow(p);
            return Eigen::MatrixXd(es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose());
        };
        auto gram = [&](const std::vector<ScaledVector>& a, const std::vector<ScaledVector>& b) {
            Eigen::MatrixXd G(a.size(), b.size());
            for (std::size_t i = 0; i < a.size(); ++i)
                for (std::size_t j = 0; j < b.size(); ++j) G(i, j) = g.inner(a[i], b[j], k).value();
            return G;
        };
        auto lin = [&](const std::vector<ScaledVector>& xs, const Eigen::MatrixXd& coef) {
            std::vector<const ScaledVector*> ptr;
            for (auto& z : xs) ptr.push_back(&z);
            std::vector<ScaledVector> r;
            for (int i = 0; i < coef.cols(); ++i) {
                std::vector<double> c(coef.rows());
                for (int j = 0; j < coef.rows(); ++j) c[j] = coef(j, i);
                r.push_back(combine(ptr, c));
            }
            return r;
        };
        Eigen::MatrixXd Y = gram(y, y);
        {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Y);
            if (!(es.eigenvalues().minCoeff() > 1e-12 * es.eigenvalues().maxCoeff()))
                throw ProjectionDegenerate("filtered quasimodes are linearly dependent");
        }
        std::vector<ScaledVector> u = lin(y, sym_pow(Y, -0.5));  // orthonormal basis of the cluster
        Eigen::MatrixXd C = gram(u, q);                         // Q q_j = sum_i C_ij u_i
        Eigen::MatrixXd H = C.transpose() * C;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
        const auto& ev = es.eigenvalues();
        LocalizedBasis::GramInfo gi;
        gi.degree = k;
        gi.cluster = "small";
        gi.cond = ev.minCoeff() > 0 ? ev.maxCoeff() / ev.minCoeff() : INFINITY;
        gi.defect = (ev.array() - 1.0).abs().maxCoeff();
        if (!(gi.cond <= 1e6))
            throw ProjectionDegenerate("Gram matrix of projected quasimodes has condition " +
                                       std::to_string(gi.cond) + " (t too small?)");
        std::vector<ScaledVector> E = lin(u, C * sym_pow(H, -0.5));
        for (int i = 0; i < m; ++i) {
            LocalizedVector lv;
            lv.label = crit[i].label;
            lv.degree = k;
            lv.cluster = "small";
            lv.x = g.normalized(std::move(E[i]), k);
            if (g.inner(lv.x, q[i], k).sign < 0)
                for (double& v : lv.x.m) v = -v;
            out->vectors.push_back(std::move(lv));
        }
        out->gram.push_back(gi);
        // one-dimensional large clusters: inverse iteration just below the eigenvalue
        for (auto& L : rep.large) {
            const auto& c = f_.by_label(L.label);
            ScaledVector qc = quasimode(c, k);
            ScaledVector e = qc;
            const double sigma = L.value * (1.0 - 1e-8);
            for (int it = 0; it < 3; ++it) e = g.normalized(g.resolvent(e, k, sigma), k);
            LogReal s = g.inner(e, qc, k);
            if (s.sign < 0)
                for (double& v : e.m) v = -v;
            LocalizedBasis::GramInfo gl;
            gl.degree = k;
            gl.cluster = L.label;
            gl.defect = std::fabs(1.0 - std::exp(2.0 * s.log));
            out->gram.push_back(gl);
            out->vectors.push_back({L.label, k, L.label, std::move(e)});
        }
    }
    loc_ = std::move(out);
    return *loc_;
}

const MatrixEntry& MatrixElements::get(const std::string& row, const std::string& col) const {
    for (auto& e : entries)
        if (e.row == row && e.col == col) return e;
    throw InputError("no matrix element (" + row + ", " + col + ")");
}

MatrixElements CircleLab::elements() const {
    const auto& B = localized();
    MatrixElements M;
    M.t = t_;
    for (auto& r : B.vectors) {
        if (r.degree != 1) continue;
        for (auto& c : B.vectors)
            if (c.degree == 0) {
                LogReal v = gauge().pair_d(r.x, c.x);
                bool tiny = v.sign == 0.0 || v.log - r.x.log_scale - c.x.log_scale < std::log(1e-9);
                M.entries.push_back({r.label, c.label, v, tiny});
            }
    }
    return M;
}

CohomologyCounts CircleLab::cohomology() const {
    CohomologyCounts C;
    for (int k = 0; k < 2; ++k) {
        const SymTridiag& D = k == 0 ? W_.Delta0 : W_.Delta1;
        int cnt = 0;
        for (auto& p : eigenpairs(k))
            if (p.value <= 1e-8 * D.scale()) ++cnt;
        (k == 0 ? C.threshold0 : C.threshold1) = cnt;
    }
    // rank of d restricted to the small clusters; mantissa sums are O(1) when
    // the true entry is nonzero and O(1e-13) otherwise, whatever the scales
    const auto& B = localized();
    std::vector<const LocalizedVector*> r, c;
    for (auto& v : B.vectors)
        if (v.cluster == "small") (v.degree == 0 ? c : r).push_back(&v);
    Eigen::MatrixXd S(r.size(), c.size());
    for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t j = 0; j < c.size(); ++j) {
            LogReal v = gauge().pair_d(r[i]->x, c[j]->x);
            S(i, j) = v.sign == 0.0 ? 0.0 : v.sign * std::exp(v.log - r[i]->x.log_scale - c[j]->x.log_scale);
        }
    int rank = 0;
    if (S.size() > 0) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(S);
        for (int i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()(i) > 1e-6) ++rank;
    }
    C.kernel0 = static_cast<int>(c.size()) - rank;
    C.kernel1 = static_cast<int>(r.size()) - rank;
    return C;
}

std::vector<ClusterReport> spectral_clusters(const CircleFunction& f, double t, const LabOptions& opt) {
    CircleLab lab(f, t, opt);
    return {lab.clusters(0), lab.clusters(1)};
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw InputError("slope needs >= 2 matching points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double den = n * sxx - sx * sx;
    if (den == 0.0) throw InputError("degenerate abscissae");
    return (n * sxy - sx * sy) / den;
}

std::vector<ScalingFit> scaling_fit(const CircleFunction& f, const std::vector<double>& t_list,
                                    const LabOptions& opt) {
    if (t_list.size() < 4) throw InputError("scaling fit needs at least 4 values of t");
    for (std::size_t i = 0; i < t_list.size(); ++i)
        if (!(t_list[i] > 0) || (i > 0 && !(t_list[i] > t_list[i - 1])))
            throw InputError("t values must be positive and increasing");
    const double r0 = t_list[1] / t_list[0];
    for (std::size_t i = 1; i < t_list.size(); ++i)
        if (std::fabs(t_list[i] / t_list[i - 1] - r0) > 1e-6 * r0)
            throw InputError("t values must be geometrically spaced");
    auto bds = f.birth_deaths();
    if (bds.empty()) throw InputError("scaling fit needs a birth-death point");
    std::vector<std::vector<LargeEntry>> large(t_list.size());
    parallel_for(static_cast<int>(t_list.size()), opt.threads, [&](int i) {
        CircleLab lab(f, t_list[i], opt);
        large[i] = lab.clusters(0).large;
    });
    std::vector<ScalingFit> out;
    const double e1 = constants().e.at(0);
    for (auto& c : bds) {
        ScalingFit s;
        s.label = c.label;
        s.a = c.a;
        s.t = t_list;
        for (auto& L : large)
            for (auto& e : L)
                if (e.label == c.label) s.E.push_back(e.value);
        s.exponent = loglog_slope(s.t, s.E);
        s.constant = s.E.back() / std::pow(s.t.back(), 2.0 / 3.0);
        s.target = e1 * pow23(std::fabs(c.a));
        out.push_back(std::move(s));
    }
    return out;
}

std::string clusters_csv(const std::vector<ClusterReport>& reports) {
    std::ostringstream o;
    o.precision(17);
    o << "degree,t,cluster,label,eigenvalue,eigenvalue_over_t23\n";
    for (auto& R : reports) {
        const double s = std::pow(R.t, 2.0 / 3.0);
        for (double v : R.small) o << R.degree << ',' << R.t << ",small,," << v << ',' << v / s << '\n';
        for (auto& L : R.large)
            o << R.degree << ',' << R.t << ",large," << L.label << ',' << L.value << ',' << L.value / s << '\n';
        o << R.degree << ',' << R.t << ",very_large_floor,," << R.very_large_floor << ','
          << R.very_large_floor / s << '\n';
    }
    return o.str();
}

}  // namespace wittenlab
