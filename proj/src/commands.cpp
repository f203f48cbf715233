#include "wittenlab/commands.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>

#include "wittenlab/complex_io.hpp"
#include "wittenlab/constants.hpp"
#include "wittenlab/errors.hpp"
#include "wittenlab/local_model.hpp"
#include "wittenlab/oscillator1d.hpp"
#include "wittenlab/parallel.hpp"
#include "wittenlab/whs_compare.hpp"

namespace wittenlab {

namespace {

std::string num(double x) {
    std::ostringstream o;
    o << std::setprecision(10) << x;
    return o.str();
}

std::string le(double b) { return "<= " + num(b); }

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

double h_dot(const std::vector<double>& u, const std::vector<double>& v, double h) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return s * h;
}

std::string csv_row(std::initializer_list<std::string> cells) {
    std::string s;
    for (auto& c : cells) s += (s.empty() ? "" : ",") + c;
    return s + "\n";
}

std::string full(double x) {
    std::ostringstream o;
    o << std::setprecision(17) << x;
    return o.str();
}

std::string join(const std::vector<int>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + ")";
}

void emit(Summary& S, const CommonOptions& opt, std::ostream& log, const std::string& name, const std::string& body) {
    auto path = write_report(opt.out, name, body);
    S.file(path);
    log << "wrote " << path << "\n";
}

}  // namespace

// ---- constants -----------------------------------------------------------------

Summary cmd_constants(const CommonOptions& opt, std::ostream& log, const std::string& path, int n, double L) {
    Summary S("constants");
    Constants c = run_oracle(n, L);
    write_constants(c, path);
    S.file(path);
    log << "wrote " << path << "\n";
    for (std::size_t m = 0; m < c.e.size(); ++m) log << "e" << m + 1 << " = " << full(c.e[m]) << "\n";
    log << "Xi1(0) = " << full(c.xi1_0) << "\n";
    bool inc = c.e.size() >= 2 && c.e[0] > 0;
    for (std::size_t m = 1; m < c.e.size(); ++m) inc = inc && c.e[m] > c.e[m - 1];
    S.add("e strictly increasing, e1 > 0", inc, c.e.empty() ? NAN : c.e[0]);
    S.add("Richardson pair relative gap", c.oracle.richardson_rel_gap <= 1e-8, c.oracle.richardson_rel_gap, le(1e-8));
    (void)opt;
    return S;
}

// ---- oscillator ----------------------------------------------------------------

Summary cmd_osc1d(const CommonOptions& opt, std::ostream& log, double a, double t, int k, bool harmonic, int sign) {
    Summary S("osc1d");
    if (k < 1) throw InputError("--k must be positive");
    if (sign != 1 && sign != -1) throw InputError("--sign must be +1 or -1");
    const Model1D m = harmonic ? Model1D::harmonic(t, sign) : Model1D::anharmonic(a, t, sign);
    const Spectrum1D sp = spectrum(m, k);
    std::string csv = "m,eigenvalue,over_unit,reference,rel_dev\n";
    double worst = 0.0;
    const Constants* C = harmonic ? nullptr : try_constants();
    for (int i = 0; i < k; ++i) {
        const double v = sp.values[i];
        double ref = NAN;
        if (harmonic) ref = m.harmonic_level(i);
        else if (C && i < static_cast<int>(C->e.size())) ref = C->e[i] * m.unit();
        const double d = std::isnan(ref) ? NAN : rel(v, ref);
        if (!std::isnan(d)) worst = std::max(worst, d);
        csv += csv_row({std::to_string(i), full(v), full(v / m.unit()), full(ref), full(d)});
        log << "m=" << i << "  E=" << full(v) << "  E/unit=" << full(v / m.unit()) << "\n";
    }
    emit(S, opt, log, "osc1d.csv", csv);
    S.add(harmonic ? "harmonic ladder (closed form)" : "|at|^{2/3} e_m scaling against constants", worst <= 1e-6, worst,
          le(1e-6));
    return S;
}

Summary cmd_scaling(const CommonOptions& opt, std::ostream& log, const std::vector<double>& t_list, int k) {
    Summary S("scaling");
    if (t_list.empty()) throw InputError("scaling needs --t values");
    if (k < 1) throw InputError("--k must be positive");
    const Spectrum1D base = spectrum(Model1D::anharmonic(1.0, 1.0, -1), k);
    std::vector<Spectrum1D> per(t_list.size());
    parallel_for(static_cast<int>(t_list.size()), opt.threads,
                 [&](int i) { per[i] = spectrum(Model1D::anharmonic(1.0, t_list[i], -1), k); });
    std::string csv = "t,m,eigenvalue,t23_e_m,rel_dev\n";
    double worst = 0.0;
    for (std::size_t j = 0; j < t_list.size(); ++j) {
        const double f = std::pow(t_list[j], 2.0 / 3.0);
        for (int m = 0; m < k; ++m) {
            const double d = rel(per[j].values[m], f * base.values[m]);
            worst = std::max(worst, d);
            csv += csv_row({full(t_list[j]), std::to_string(m), full(per[j].values[m]), full(f * base.values[m]), full(d)});
        }
    }
    log << "max relative deviation from t^{2/3} e_m(P(1)): " << num(worst) << "\n";
    emit(S, opt, log, "scaling.csv", csv);
    S.add("t^{2/3} scaling of the anharmonic levels", worst <= 1e-6, worst, le(1e-6));
    return S;
}

Summary cmd_local(const CommonOptions& opt, std::ostream& log, const std::string& model, int index, int dim, double a,
                  double t, int m) {
    Summary S("local");
    CriticalPointModel M;
    if (model == "bd") M = CriticalPointModel::birth_death(index, dim, a);
    else if (model == "nd") M = CriticalPointModel::nondegenerate(index, dim);
    else throw InputError("--model must be bd or nd");
    std::vector<TaggedValue> all;
    std::string csv = "degree,value,sector\n";
    for (int d = 0; d <= dim; ++d)
        for (auto& v : degree_spectrum(M, d, t, m)) {
            all.push_back(v);
            std::string sec;
            for (int ax : v.sector.axes) sec += (sec.empty() ? "" : " ") + std::to_string(ax);
            csv += csv_row({std::to_string(d), full(v.value), "[" + sec + "]"});
        }
    std::sort(all.begin(), all.end(), [](auto& x, auto& y) { return x.value < y.value; });
    emit(S, opt, log, "local.csv", csv);
    for (std::size_t i = 0; i < std::min<std::size_t>(4, all.size()); ++i)
        log << "lowest[" << i << "] = " << full(all[i].value) << " in degree " << all[i].sector.degree() << "\n";
    if (M.is_bd()) {
        const auto& C = constants();
        const double target = C.e[0] * std::pow(std::fabs(a * t), 2.0 / 3.0);
        const bool two = all.size() >= 3;
        const double d0 = two ? rel(all[0].value, target) : NAN, d1 = two ? rel(all[1].value, target) : NAN;
        S.add("two lowest equal e1 |at|^{2/3}", two && std::max(d0, d1) <= 1e-6, std::max(d0, d1), le(1e-6));
        std::vector<int> degs{all[0].sector.degree(), all[1].sector.degree()};
        std::sort(degs.begin(), degs.end());
        S.add("lowest pair in degrees index, index+1", degs[0] == index && degs[1] == index + 1, degs[0]);
        const double floor = std::min(4.0 * t, C.e[1] * std::pow(std::fabs(a * t), 2.0 / 3.0)) - 1e-6;
        S.add("third-lowest above min(4t, e2 |at|^{2/3})", two && all[2].value >= floor, all[2].value,
              ">= " + num(floor));
    } else {
        const bool ok = !all.empty() && std::fabs(all[0].value) <= 1e-6 * t && all[0].sector.degree() == index;
        S.add("ground state 0 in degree index", ok, all.empty() ? NAN : all[0].value);
    }
    return S;
}

// ---- circle --------------------------------------------------------------------

namespace {

struct CircleRun {
    std::vector<ClusterReport> clusters;
    double susy = NAN;
    CohomologyCounts coh;
    double eq7 = NAN;  // max relative | ||d E0||^2 - lambda | over bd points
    std::string error;
};

CircleRun run_circle_t(const CircleFunction& f, double t, const LabOptions& lo, bool with_bases) {
    CircleRun r;
    try {
        CircleLab lab(f, t, lo);
        r.susy = lab.supersymmetry_mismatch(10);
        r.coh = lab.cohomology();
        r.clusters = {lab.clusters(0), lab.clusters(1)};
        if (with_bases && !f.birth_deaths().empty()) {
            const auto B = lab.bases();
            const auto& W = lab.matrices();
            r.eq7 = 0.0;
            for (auto& [label, E0] : B.large[0]) {
                auto dE = W.apply_D(E0);
                const double lam = B.large_value[0].at(label);
                r.eq7 = std::max(r.eq7, rel(h_dot(dE, dE, W.h), lam));
            }
        }
    } catch (const ClusterOverlap& e) {
        r.error = e.what();
    }
    return r;
}

}  // namespace

Summary cmd_circle(const CommonOptions& opt, std::ostream& log, const ExperimentConfig& cfg, const std::string& what) {
    Summary S("circle " + what);
    cfg.validate();
    const CircleFunction f = cfg.function();
    LabOptions lo = cfg.lab_options();
    if (opt.threads > 0) lo.threads = opt.threads;
    const auto& ts = cfg.t_schedule;
    S.note("example", cfg.example.empty() ? "custom" : cfg.example);

    if (what == "clusters" || what == "elements") {
        const bool bases = what == "elements";
        std::vector<CircleRun> runs(ts.size());
        parallel_for(static_cast<int>(ts.size()), lo.threads, [&](int i) {
            LabOptions one = lo;
            one.threads = 1;
            runs[i] = run_circle_t(f, ts[i], one, bases);
        });
        const int nmin = static_cast<int>(f.minima().size()), nmax = static_cast<int>(f.maxima().size());
        const int nbd = static_cast<int>(f.birth_deaths().size());
        std::vector<ClusterReport> all;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const auto& r = runs[i];
            const std::string at = " (t=" + num(ts[i]) + ")";
            if (!r.error.empty()) {
                S.add("clusters separated" + at, false, NAN, "", r.error);
                log << "t=" << ts[i] << ": " << r.error << "\n";
                continue;
            }
            all.insert(all.end(), r.clusters.begin(), r.clusters.end());
            if (what == "clusters") {
                const auto& c0 = r.clusters[0];
                const auto& c1 = r.clusters[1];
                log << "t=" << ts[i] << "  small " << c0.count_small() << "/" << c1.count_small() << "  large "
                    << c0.large.size() << "/" << c1.large.size() << "\n";
                S.add("small counts equal #min, #max" + at,
                      c0.count_small() == nmin && c1.count_small() == nmax, c0.count_small() + c1.count_small());
                S.add("one large eigenvalue per birth-death point" + at,
                      static_cast<int>(c0.large.size()) == nbd && static_cast<int>(c1.large.size()) == nbd,
                      static_cast<double>(c0.large.size()));
                S.add("supersymmetric pairing, 10 pairs" + at, r.susy <= 1e-10, r.susy, le(1e-10));
                // threshold counts also catch tunneling eigenvalues below 1e-8, so only the rank decides
                S.add("cohomology of the circle" + at, r.coh.kernel0 == 1 && r.coh.kernel1 == 1, r.coh.kernel0, "",
                      "below-threshold eigenvalues " + std::to_string(r.coh.threshold0) + "/" +
                          std::to_string(r.coh.threshold1));
            } else if (nbd > 0) {
                log << "t=" << ts[i] << "  max rel | ||dE0||^2 - lambda | = " << num(r.eq7) << "\n";
                S.add("||d(t)E0||^2 equals the large eigenvalue" + at, r.eq7 <= 1e-8, r.eq7, le(1e-8));
            }
        }
        if (what == "clusters") {
            emit(S, opt, log, "clusters.csv", clusters_csv(all));
        } else {
            auto rows = theorem2prime_check(f, ts, lo);
            emit(S, opt, log, "theorem2prime.csv", theorem2prime_csv(rows));
        }
        return S;
    }

    if (what == "fit") {
        const auto fits = scaling_fit(f, ts, lo);
        std::string csv = "label,a,t,E,exponent,constant,target\n";
        for (auto& F : fits) {
            for (std::size_t j = 0; j < F.t.size(); ++j)
                csv += csv_row({F.label, full(F.a), full(F.t[j]), full(F.E[j]), full(F.exponent), full(F.constant),
                                full(F.target)});
            log << F.label << ": exponent " << num(F.exponent) << ", constant " << num(F.constant) << " (target "
                << num(F.target) << ")\n";
            // window centred at 0.67 so the default tolerance gives [0.66, 0.68]
            const double lo_e = 0.67 - cfg.tol.scaling, hi_e = 0.67 + cfg.tol.scaling;
            S.add(F.label + " exponent near 2/3", F.exponent >= lo_e && F.exponent <= hi_e, F.exponent,
                  "[" + num(lo_e) + ", " + num(hi_e) + "]");
            const double dc = rel(F.constant, F.target);
            S.add(F.label + " constant e1 |a|^{2/3}", dc <= cfg.tol.ratio, dc, le(cfg.tol.ratio));
        }
        if (fits.empty()) log << "no birth-death points, nothing to fit\n";
        emit(S, opt, log, "fit.csv", csv);
        return S;
    }
    throw InputError("unknown circle subcommand '" + what + "' (clusters, fit, elements)");
}

// ---- complex -------------------------------------------------------------------

namespace {

CochainComplex load_complex(const ComplexSource& src) {
    if (!src.file.empty() && !src.example.empty()) throw InputError("give either --file or --example, not both");
    if (!src.file.empty()) return read_complex(src.file);
    if (!src.example.empty()) return circle_complex_from_function(make_function(named_example(src.example))).complex;
    throw InputError("complex needs --file or --example");
}

std::vector<int> nondeg_counts(const CochainComplex& c) {
    std::vector<int> n(c.degrees(), 0);
    for (int k = 0; k < c.degrees(); ++k)
        for (auto& cell : c.cells[k]) n[k] += cell.kind == CellKind::NonDeg;
    return n;
}

std::vector<int> dims(const CochainComplex& c) {
    std::vector<int> d;
    for (int k = 0; k < c.degrees(); ++k) d.push_back(static_cast<int>(c.dim(k)));
    return d;
}

}  // namespace

Summary cmd_complex(const CommonOptions& opt, std::ostream& log, const std::string& what, const ComplexSource& src,
                    bool have_seed, std::uint64_t seed, int count) {
    Summary S("complex " + what);
    if (what == "fuzz") {
        if (!have_seed) throw InputError("complex fuzz needs an explicit --seed");
        if (count < 1) throw InputError("--count must be positive");
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> nbd(0, 6), ndeg(2, 4);
        std::string csv = "case,dims,betti,eliminated_dims,eliminated_betti,nondeg,ok\n";
        int bad = 0;
        for (int i = 0; i < count; ++i) {
            FuzzOptions fo;
            fo.degrees = ndeg(rng);
            fo.bd_pairs = nbd(rng);
            std::vector<int> b_expect;
            auto c = fuzz_complex(rng, fo, &b_expect);
            auto e = eliminate_all(c);
            const auto b0 = betti(c), b1 = betti(e), nd = nondeg_counts(c);
            const bool ok = b0 == b1 && b0 == b_expect && dims(e) == nd && validate(e).ok;
            bad += !ok;
            auto q = [](const std::vector<int>& v) { return "\"" + join(v) + "\""; };
            csv += csv_row({std::to_string(i), q(dims(c)), q(b0), q(dims(e)), q(b1), q(nd), ok ? "1" : "0"});
        }
        S.note("seed", std::to_string(seed));
        emit(S, opt, log, "fuzz.csv", csv);
        log << count - bad << "/" << count << " complexes preserved Betti numbers\n";
        S.add("elimination preserves Betti numbers, dims = nondegenerate counts", bad == 0, bad, "== 0");
        return S;
    }

    const CochainComplex c = load_complex(src);
    const auto rep = validate(c);
    if (what == "validate") {
        for (auto& v : rep.violations) log << "violation: " << v << "\n";
        const auto b = rep.ok ? betti(c) : std::vector<int>{};
        log << "dims " << join(dims(c)) << (rep.ok ? "  betti " + join(b) : "") << "\n";
        S.add("valid cochain complex", rep.ok, static_cast<double>(rep.violations.size()), "== 0",
              rep.ok ? "" : rep.violations.front());
        return S;
    }
    if (!rep.ok) throw NotAComplex(rep.violations.front());

    if (what == "eliminate") {
        std::vector<EliminationStep> trace;
        const auto e = eliminate_all(c, &trace);
        for (auto& s : trace) log << "eliminated " << s.pair << " (degree " << s.degree << ", f=" << num(s.f_value) << ")\n";
        const auto b0 = betti(c), b1 = betti(e), nd = nondeg_counts(c);
        log << "C_nd dims " << join(dims(e)) << "  betti " << join(b1) << "\n";
        std::string body = "# eliminated complex\n" + format_complex(e);
        emit(S, opt, log, "eliminated.cplx", body);
        S.note("dims", join(dims(e)));
        S.add("Betti numbers preserved", b0 == b1, 0, "", join(b0) + " vs " + join(b1));
        S.add("dims equal nondegenerate counts", dims(e) == nd, 0, "", join(dims(e)));
        return S;
    }
    if (what == "incidence") {
        const FlowGraph g = flow_graph_from_complex(c);
        g.check_acyclic();
        const ITable I = incidence_recursive(g);
        std::string csv = "from,to,recursive,pathsum\n";
        int mismatch = 0;
        for (auto& [k, v] : I) {
            const long long p = generalized_incidence_pathsum(g, k.first, k.second);
            mismatch += p != v;
            csv += csv_row({k.first, k.second, std::to_string(v), std::to_string(p)});
            log << "I(" << k.first << ", " << k.second << ") = " << v << "\n";
        }
        emit(S, opt, log, "incidence.csv", csv);
        S.add("recursion equals path sum", mismatch == 0, mismatch, "== 0");
        const auto H = hat_basis(c, I);
        S.add("hat basis reproduces the eliminated differential", H.matches_elimination, 0);
        return S;
    }
    throw InputError("unknown complex subcommand '" + what + "' (validate, eliminate, incidence, fuzz)");
}

// ---- compare -------------------------------------------------------------------

Summary cmd_compare(const CommonOptions& opt, std::ostream& log, const ExperimentConfig& cfg) {
    Summary S("compare");
    cfg.validate();
    const CircleFunction f = cfg.function();
    LabOptions lo = cfg.lab_options();
    if (opt.threads > 0) lo.threads = opt.threads;
    const auto& ts = cfg.t_schedule;

    if (f.self_indexed()) {
        const auto reps = f_star_sweep(f, ts, lo);
        emit(S, opt, log, "fstar.csv", fstar_csv(reps));
        std::vector<double> dev;
        bool mono = true;
        for (std::size_t i = 0; i < reps.size(); ++i) {
            dev.push_back(reps[i].max_deviation);
            if (i > 0 && dev[i] > dev[i - 1]) mono = false;
            log << "t=" << ts[i] << "  ||F - I|| = " << num(dev[i]) << "  defect = " << num(reps[i].defect) << "\n";
        }
        S.add("||f* - I|| nonincreasing in t", mono, dev.back());
        if (dev.size() >= 2) {
            const double s = loglog_slope(ts, dev);
            S.add("log-log slope of ||f* - I||", s <= -0.8, s, le(-0.8));
        }
        S.add("chain-map defect at largest t", reps.back().defect <= 1e-3, reps.back().defect, le(1e-3));
    } else {
        log << "function is not self-indexed: skipping f*, extension rows only\n";
        S.note("fstar", "skipped (not self-indexed)");
    }

    const auto rows = theorem2prime_check(f, ts, lo);
    emit(S, opt, log, "theorem2prime.csv", theorem2prime_csv(rows));
    const double tmax = ts.back();
    for (auto& r : rows) {
        if (r.t != tmax) continue;
        log << r.pair() << ": rescaled " << num(r.rescaled) << " target "
            << num(r.target) << "\n";
        const double tol = r.birth_death ? cfg.tol.ratio : cfg.tol.integer;
        S.add(r.pair() + (r.birth_death ? " ratio" : " incidence"),
              r.abs_err <= tol, r.abs_err, le(tol));
    }
    return S;
}

// ---- exit ----------------------------------------------------------------------

int finish(const Summary& s, const CommonOptions& opt, std::ostream& log) {
    const auto path = write_report(opt.out, "summary.json", s.json() + "\n");
    int failed = 0;
    for (auto& c : s.checks()) {
        log << (c.pass ? "PASS " : "FAIL ") << c.name << "  value=" << num(c.value);
        if (!c.bound.empty()) log << " (" << c.bound << ")";
        if (!c.detail.empty()) log << "  " << c.detail;
        log << "\n";
        failed += !c.pass;
    }
    log << "summary: " << path << "  " << s.checks().size() - failed << "/" << s.checks().size() << " checks passed\n";
    return failed && opt.assert_mode ? 2 : 0;
}

}  // namespace wittenlab
