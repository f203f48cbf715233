#include "wittenlab/whs_compare.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "wittenlab/constants.hpp"
#include "wittenlab/errors.hpp"
#include "wittenlab/parallel.hpp"

namespace wittenlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double sgn(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

Eigen::MatrixXd to_dense(const IntMatrix& m, std::size_t rows, std::size_t cols) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, cols);
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j) A(i, j) = static_cast<double>(m[i][j]);
    return A;
}

}  // namespace

std::map<std::string, LogReal> integrate_cochain(const Gauge& G, const CircleComplex& cc, const ScaledVector& x,
                                                 int degree) {
    const WittenMatrices& W = G.matrices();
    const int n = W.n;
    const double h = W.h;
    if (static_cast<int>(x.m.size()) != n) throw InputError("integrate_cochain: form has the wrong length");
    std::map<std::string, LogReal> out;
    if (degree == 0) {
        for (auto& cell : cc.complex.cells[0]) {
            auto it = cc.points.find(cell.id);
            if (it == cc.points.end() || !std::isfinite(it->second))
                throw CellOutsideGrid("0-cell " + cell.id + " has no position");
            double s = std::fmod(it->second, kTwoPi);
            if (s < 0) s += kTwoPi;
            s /= h;
            int i = static_cast<int>(std::floor(s));
            double fr = s - i;
            i %= n;
            const double v = (1.0 - fr) * x.m[i] + fr * x.m[(i + 1) % n];
            out[cell.id] = LogReal::from(v).scaled(x.log_scale);
        }
    } else if (degree == 1) {
        if (cc.complex.degrees() < 2) return out;
        for (auto& cell : cc.complex.cells[1]) {
            auto it = cc.arcs.find(cell.id);
            if (it == cc.arcs.end()) throw CellOutsideGrid("1-cell " + cell.id + " has no arc");
            const auto [L, R] = it->second;
            if (!std::isfinite(L) || !std::isfinite(R) || R <= L || R - L > kTwoPi * (1.0 + 1e-12))
                throw CellOutsideGrid("arc of " + cell.id + " is not a proper sub-arc of the circle");
            const double o = cc.orientation.count(cell.id) ? cc.orientation.at(cell.id) : 1.0;
            std::vector<double> tau, sg;
            const long long j0 = static_cast<long long>(std::floor(L / h));
            const long long j1 = static_cast<long long>(std::ceil(R / h));
            for (long long j = j0; j < j1; ++j) {
                const double len = std::min(R, (j + 1) * h) - std::max(L, j * h);
                if (len <= 0) continue;
                const int i = static_cast<int>(((j % n) + n) % n);
                if (x.m[i] == 0.0) continue;
                tau.push_back(std::log(len) + 2.0 * W.t * W.f_mids[i] + std::log(std::fabs(x.m[i])));
                sg.push_back(o * sgn(x.m[i]));
            }
            out[cell.id] = log_sum(tau, sg).scaled(x.log_scale);
        }
    } else {
        throw DegreeMismatch("forms on the circle have degree 0 or 1");
    }
    return out;
}

std::map<std::string, LogReal> integrate_exact(const Gauge& G, const CircleComplex& cc, const ScaledVector& w) {
    const WittenMatrices& W = G.matrices();
    const int n = W.n;
    const double h = W.h;
    if (static_cast<int>(w.m.size()) != n) throw InputError("integrate_exact: form has the wrong length");
    std::map<std::string, LogReal> out;
    if (cc.complex.degrees() < 2) return out;
    for (auto& cell : cc.complex.cells[1]) {
        auto it = cc.arcs.find(cell.id);
        if (it == cc.arcs.end()) throw CellOutsideGrid("1-cell " + cell.id + " has no arc");
        const auto [L, R] = it->second;
        if (!std::isfinite(L) || !std::isfinite(R) || R <= L || R - L > kTwoPi * (1.0 + 1e-12))
            throw CellOutsideGrid("arc of " + cell.id + " is not a proper sub-arc of the circle");
        const double o = cc.orientation.count(cell.id) ? cc.orientation.at(cell.id) : 1.0;
        double s = 0.0;
        const long long j0 = static_cast<long long>(std::floor(L / h));
        const long long j1 = static_cast<long long>(std::ceil(R / h));
        for (long long j = j0; j < j1; ++j) {
            const double len = std::min(R, (j + 1) * h) - std::max(L, j * h);
            if (len <= 0) continue;
            const int i = static_cast<int>(((j % n) + n) % n);
            s += len * (w.m[(i + 1) % n] - w.m[i]) / h;
        }
        out[cell.id] = LogReal::from(o * s).scaled(w.log_scale);
    }
    return out;
}

NormalizationSet normalizations(const CircleFunction& f, double t) {
    if (!(t > 0)) throw InputError("normalizations need t > 0");
    const auto& C = constants();
    if (C.e.empty() || !(C.xi1_0 > 0)) throw MissingConstants("e1 and Xi1(0) are required");
    NormalizationSet N;
    N.t = t;
    int nbd = 0;
    for (auto& c : f.critical_points()) {
        if (c.is_bd()) {
            ++nbd;
            const double at = std::fabs(c.a * t);
            N.log_M[c.label] = std::log(C.xi1_0) + std::log(at) / 6.0 + t * c.f_value;
            N.A[c.label] = 1.0 / (std::sqrt(C.e[0]) * std::cbrt(at));
        } else {
            const int k = c.index();
            N.log_small[c.label] = (1.0 - 2.0 * k) / 4.0 * std::log(std::numbers::pi / (2.0 * std::fabs(c.curvature) * t)) -
                                   t * c.f_value;
        }
    }
    N.beta_zero_assumed = nbd > 1;  // every birth-death point on the circle has index 0
    return N;
}

ChainMapReport f_star(const CircleLab& lab) {
    const CircleFunction& f = lab.function();
    if (!f.self_indexed()) throw NotSelfIndexed("f* needs minima at 0 and maxima at 1");
    const double t = lab.t();
    const CircleComplex cc = circle_complex_from_function(f);
    const CochainComplex& cx = cc.complex;
    const HatBasis H = hat_basis(cx, incidence_recursive(cc.graph));
    const NormalizationSet N = normalizations(f, t);
    const Gauge& G = lab.gauge();
    const LocalizedBasis& B = lab.localized();
    const MatrixElements E = lab.elements();

    auto bd_label = [](const Cell& c) { return c.id.substr(0, c.id.rfind('.')); };
    auto a_sign = [&](const std::string& y) { return sgn(f.by_label(y).a); };

    ChainMapReport R;
    R.t = t;
    std::vector<Eigen::MatrixXd> T(2);  // hat vectors in cell coordinates
    for (int k = 0; k < 2; ++k) {
        const auto& cells = cx.cells[k];
        const std::size_t m = cells.size();
        std::vector<std::string> rows, cols;
        T[k] = Eigen::MatrixXd::Zero(m, m);
        for (std::size_t j = 0; j < m; ++j) {
            const Cell& c = cells[j];
            std::string hat = c.kind == CellKind::NonDeg ? c.id
                              : c.kind == CellKind::Bd0  ? c.id + ":0"
                                                         : c.partner + ":1";
            rows.push_back(hat);
            for (auto& [id, w] : H.get(hat).coeffs) T[k](cx.locate(id).second, j) = static_cast<double>(w);
        }
        Eigen::MatrixXd raw(m, m);
        const auto Tlu = T[k].fullPivLu();
        for (std::size_t j = 0; j < m; ++j) {
            const Cell& c = cells[j];
            std::string label;
            double lognorm = 0.0, sign = 1.0;
            if (c.kind == CellKind::NonDeg) {
                label = c.id;
                lognorm = N.log_small.at(label);
                cols.push_back("E:" + label);
            } else {
                label = bd_label(c);
                lognorm = -N.log_M.at(label);
                if (c.kind == CellKind::Bd1) {
                    lognorm -= std::log(N.A.at(label));
                    sign = a_sign(label);  // orient hat E_y1 so that <hat E_y1, d hat E_y0> > 0
                    cols.push_back("E1:" + label);
                } else {
                    cols.push_back("E0:" + label);
                }
            }
            std::map<std::string, LogReal> Int;
            if (c.kind == CellKind::Bd1) {
                // E_y1 = d(t) E_y0 / lambda for a one-dimensional cluster
                LogReal lambda = E.get(label, label).value;
                lognorm -= lambda.log;
                sign *= lambda.sign;
                Int = integrate_exact(G, cc, B.get(label, 0).x);
            } else {
                Int = integrate_cochain(G, cc, B.get(label, k).x, k);
            }
            Eigen::VectorXd v(m);
            for (std::size_t i = 0; i < m; ++i) v(i) = sign * Int.at(cells[i].id).scaled(lognorm).value();
            raw.col(j) = v;
        }
        R.F.push_back(Tlu.solve(raw));
        R.rows.push_back(rows);
        R.cols.push_back(cols);
        const double dev = (R.F.back() - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff();
        R.deviation.push_back(dev);
        R.max_deviation = std::max(R.max_deviation, dev);
    }
    // spectral differential in the normalized bases
    const auto& c0 = cx.cells[0];
    const auto& c1 = cx.cells[1];
    Eigen::MatrixXd Dt = Eigen::MatrixXd::Zero(c1.size(), c0.size());
    for (std::size_t i = 0; i < c1.size(); ++i)
        for (std::size_t j = 0; j < c0.size(); ++j) {
            const Cell& r = c1[i];
            const Cell& q = c0[j];
            if (r.kind == CellKind::NonDeg && q.kind == CellKind::NonDeg) {
                LogReal v = E.get(r.id, q.id).value;
                Dt(i, j) = v.scaled(N.log_small.at(q.id) - N.log_small.at(r.id)).value();
            } else if (r.kind == CellKind::Bd1 && q.kind == CellKind::Bd0) {
                const std::string yi = bd_label(r), yj = bd_label(q);
                LogReal v = E.get(yi, yj).value;
                double lg = N.log_M.at(yi) + std::log(N.A.at(yi)) - N.log_M.at(yj);
                Dt(i, j) = a_sign(yi) * v.scaled(lg).value();
            }
            // small <-> large blocks vanish: the decomposition is d(t)-invariant
        }
    R.dtilde.push_back(Dt);
    Eigen::MatrixXd D = to_dense(cx.delta[0], c1.size(), c0.size());
    R.delta.push_back(T[1].fullPivLu().solve(D * T[0]));
    R.defect = (R.delta[0] * R.F[0] - R.F[1] * Dt).cwiseAbs().maxCoeff();
    return R;
}

std::vector<ChainMapReport> f_star_sweep(const CircleFunction& f, const std::vector<double>& t_list,
                                         const LabOptions& opt) {
    std::vector<ChainMapReport> out(t_list.size());
    LabOptions inner = opt;
    inner.threads = 1;
    parallel_for(static_cast<int>(t_list.size()), opt.threads, [&](int i) {
        CircleLab lab(f, t_list[i], inner);
        out[i] = f_star(lab);
    });
    return out;
}

std::string T2Row::pair() const {
    std::string p = row + "|" + col;
    return extension ? "extension:" + p : p;
}

std::vector<T2Row> theorem2prime_check(const CircleFunction& f, const std::vector<double>& t_list,
                                       const LabOptions& opt) {
    if (t_list.empty()) throw InputError("theorem2prime_check needs at least one t");
    const CircleComplex cc = circle_complex_from_function(f);
    const ITable I = incidence_recursive(cc.graph);
    const bool self = f.self_indexed();
    const double sqrt_e1 = std::sqrt(constants().e.at(0));
    std::vector<std::vector<T2Row>> per_t(t_list.size());
    LabOptions inner = opt;
    inner.threads = 1;
    parallel_for(static_cast<int>(t_list.size()), opt.threads, [&](int k) {
        const double t = t_list[k];
        CircleLab lab(f, t, inner);
        for (auto& e : lab.elements().entries) {
            const auto& r = f.by_label(e.row);
            const auto& c = f.by_label(e.col);
            T2Row row;
            row.t = t;
            row.row = e.row;
            row.col = e.col;
            row.raw = e.value;
            if (!r.is_bd() && !c.is_bd()) {
                row.extension = !self;
                const double lg = t * (r.f_value - c.f_value) + 0.5 * std::log(std::numbers::pi / (2.0 * t)) -
                                  0.25 * std::log(std::fabs(r.curvature * c.curvature));
                row.rescaled = e.value.scaled(lg).value();
                auto it = I.find({e.row, e.col});
                row.target = it == I.end() ? 0.0 : static_cast<double>(it->second);
            } else if (r.is_bd() && c.is_bd()) {
                row.birth_death = true;
                if (e.row == e.col) {
                    row.rescaled = e.value.value() / (sqrt_e1 * std::cbrt(r.a * t));
                    row.target = 1.0;
                } else {
                    row.rescaled = e.value.value();
                    row.target = 0.0;
                }
            } else {
                continue;  // small/large cross terms vanish identically
            }
            row.abs_err = std::fabs(row.rescaled - row.target);
            per_t[k].push_back(row);
        }
    });
    std::vector<T2Row> out;
    for (auto& v : per_t) out.insert(out.end(), v.begin(), v.end());
    return out;
}

std::string format_logreal(const LogReal& x, int digits) {
    if (x.sign == 0.0) return "0";
    const double l10 = x.log / std::log(10.0);
    double e10 = std::floor(l10);
    double mant = std::pow(10.0, l10 - e10);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, mant);
    if (std::string(buf).rfind("10", 0) == 0) {  // rounding reached the next decade
        e10 += 1;
        std::snprintf(buf, sizeof buf, "%.*f", digits, mant / 10.0);
    }
    std::ostringstream os;
    os << (x.sign < 0 ? "-" : "") << buf << "e" << static_cast<long long>(e10);
    return os.str();
}

std::string fstar_csv(const std::vector<ChainMapReport>& reports) {
    std::ostringstream os;
    os.precision(17);
    os << "t,degree,row,col,F_entry,deviation,defect\n";
    for (auto& R : reports)
        for (std::size_t k = 0; k < R.F.size(); ++k)
            for (int i = 0; i < R.F[k].rows(); ++i)
                for (int j = 0; j < R.F[k].cols(); ++j)
                    os << R.t << ',' << k << ',' << R.rows[k][i] << ',' << R.cols[k][j] << ',' << R.F[k](i, j) << ','
                       << R.deviation[k] << ',' << R.defect << '\n';
    return os.str();
}

std::string theorem2prime_csv(const std::vector<T2Row>& rows) {
    std::ostringstream os;
    os.precision(17);
    os << "t,pair,raw,rescaled,target,abs_err\n";
    for (auto& r : rows)
        os << r.t << ',' << r.pair() << ',' << format_logreal(r.raw, 16) << ',' << r.rescaled << ',' << r.target << ','
           << r.abs_err << '\n';
    return os.str();
}

}  // namespace wittenlab
