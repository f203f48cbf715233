#pragma once
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "wittenlab/circle_function.hpp"
#include "wittenlab/eigensolve.hpp"
#include "wittenlab/gauge.hpp"
#include "wittenlab/witten.hpp"

namespace wittenlab {

struct LabOptions {
    int n_grid = 0;         // 0: default_grid(t, n_min, n_factor)
    int n_min = 8192;
    double n_factor = 1.0;
    Scheme scheme = Scheme::Conjugated;
    int extra_eigs = 10;    // eigenpairs computed beyond the small cluster
    int threads = 0;        // t-sweeps; 0 = hardware concurrency
};

struct LargeEntry {
    std::string label;      // birth-death point
    double value = 0.0;
};

struct ClusterReport {
    int degree = 0;
    double t = 0.0;
    double epsilon = 0.0;
    std::vector<double> small;
    std::vector<LargeEntry> large;
    double very_large_floor = 0.0;
    std::vector<double> all;  // every computed eigenvalue, ascending
    int count_small() const { return static_cast<int>(small.size()); }
};

// 0.9 x the disjointness bound; 1 when f has no birth-death points
double choose_epsilon(const CircleFunction& f);
double choose_epsilon(const std::vector<double>& abs_a);

// Windows in t^{-2/3} units: [0,eps], e1|a_j|^{2/3} +- eps, [e2|a_1|^{2/3} - eps, inf).
// Throws ClusterOverlap when an eigenvalue is stray or a count is off.
ClusterReport classify_spectrum(const CircleFunction& f, int degree, double t,
                                const std::vector<double>& eigenvalues, double eps);

struct LocalizedVector {
    std::string label;    // critical point
    int degree = 0;
    std::string cluster;  // "small" or the birth-death label
    ScaledVector x;       // gauge coordinates, unit weighted norm
};

struct LocalizedBasis {
    std::vector<LocalizedVector> vectors;
    // per (degree, cluster): ||H - I||_2 and cond(H) of the projected quasimodes
    struct GramInfo {
        int degree = 0;
        std::string cluster;
        double defect = 0.0;
        double cond = 1.0;
    };
    std::vector<GramInfo> gram;
    const LocalizedVector& get(const std::string& label, int degree) const;
};

struct MatrixEntry {
    std::string row;  // degree-1 label
    std::string col;  // degree-0 label
    LogReal value;    // <E_row, d(t) E_col>
    // mantissa sum below 1e-9: zero up to roundoff, whatever the scales
    bool negligible = false;
};

struct MatrixElements {
    double t = 0.0;
    std::vector<MatrixEntry> entries;
    const MatrixEntry& get(const std::string& row, const std::string& col) const;
};

struct CohomologyCounts {
    int threshold0 = 0, threshold1 = 0;  // eigenvalues <= 1e-8 scale
    int kernel0 = 0, kernel1 = 0;        // from the rank of d on the small clusters
};

// Everything about one (f, t) pair; heavy pieces are computed on demand.
class CircleLab {
public:
    CircleLab(CircleFunction f, double t, LabOptions opt = {});

    const CircleFunction& function() const { return f_; }
    double t() const { return t_; }
    const WittenMatrices& matrices() const { return W_; }
    const Gauge& gauge() const;
    const std::vector<EigenPair>& eigenpairs(int degree) const;

    ClusterReport clusters(int degree) const;
    double epsilon() const { return eps_; }
    double supersymmetry_mismatch(int pairs = 10) const;
    CohomologyCounts cohomology() const;

    // eigenvector bases; vectors are h-normalized physical grid functions
    struct Bases {
        std::vector<std::vector<double>> small[2];
        std::map<std::string, std::vector<double>> large[2];
        std::map<std::string, double> large_value[2];
        double cross_orthogonality = 0.0;  // max |<u,v>_h| across clusters
    };
    Bases bases() const;

    const LocalizedBasis& localized() const;
    MatrixElements elements() const;

    // chart of a critical point: |theta - theta_c| < radius (angular)
    double chart_radius(const std::string& label) const;
    std::vector<char> chart_mask(const std::string& label, int degree) const;

    // local model ground state cut off by a plateau bump in the chart, unit weighted norm
    ScaledVector quasimode(const CriticalPoint& c, int degree) const;

private:
    CircleFunction f_;
    double t_;
    LabOptions opt_;
    double eps_;
    WittenMatrices W_;
    mutable std::unique_ptr<Gauge> gauge_;
    mutable std::unique_ptr<std::vector<EigenPair>> eig_[2];
    mutable std::unique_ptr<LocalizedBasis> loc_;

    int small_count(int degree) const;
};

std::vector<ClusterReport> spectral_clusters(const CircleFunction& f, double t, const LabOptions& opt = {});

struct ScalingFit {
    std::string label;
    double a = 0.0;
    double exponent = 0.0;
    double constant = 0.0;  // E t^{-2/3} at the largest t
    double target = 0.0;    // e1 |a|^{2/3}
    std::vector<double> t, E;
};
std::vector<ScalingFit> scaling_fit(const CircleFunction& f, const std::vector<double>& t_list,
                                    const LabOptions& opt = {});

// least squares slope of log y against log x
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// CSV rows: degree,t,cluster,label,eigenvalue,eigenvalue_over_t23
std::string clusters_csv(const std::vector<ClusterReport>& reports);

}  // namespace wittenlab
