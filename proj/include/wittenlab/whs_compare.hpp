#pragma once
#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "wittenlab/circle_lab.hpp"
#include "wittenlab/morse_complex.hpp"

namespace wittenlab {

// Int_k e^{tf} of a gauge-coordinate form, one value per cell of degree k.
//   0-cells: linear interpolation of w = e^{tf}u at the cell's angle
//   1-cells: exact integral of the piecewise constant e^{tf}v over the arc, times its orientation
// With these choices Int_1(d(t)u) = delta Int_0(u) holds exactly on the grid.
std::map<std::string, LogReal> integrate_cochain(const Gauge& G, const CircleComplex& cc, const ScaledVector& x,
                                                 int degree);

// Int_1 e^{tf} d(t)u from the 0-form gauge w = e^{tf}u, integrating the piecewise constant
// D0 w directly. The 1-form gauge of d(t)u spans e^{-2t(f_max - f_min)} and underflows
// for t beyond a few hundred; w does not.
std::map<std::string, LogReal> integrate_exact(const Gauge& G, const CircleComplex& cc, const ScaledVector& w);

// Prefactors turning Int e^{tf} of the spectral basis into cell coordinates.
// Nondegenerate points use their actual curvature c = f''/2 in place of the unit normal form.
struct NormalizationSet {
    double t = 0.0;
    std::map<std::string, double> log_small;  // log of (pi / 2|c|t)^{(1-2k)/4} e^{-t f(x)}
    std::map<std::string, double> log_M;      // birth-death: log of Xi1(0) |a t|^{1/6} e^{t f(y)}
    std::map<std::string, double> A;          // (sqrt(e1) |a t|^{1/3})^{-1}
    // a degree with several birth-death points: the off-diagonal beta terms are set to zero
    bool beta_zero_assumed = false;
};
NormalizationSet normalizations(const CircleFunction& f, double t);

struct ChainMapReport {
    double t = 0.0;
    // F[k]: rows = {hat e_x, e_y0, hat e_y1} of degree k, cols = {E_x, hat E_y0, hat E_y1}
    std::vector<Eigen::MatrixXd> F;
    std::vector<std::vector<std::string>> rows, cols;
    std::vector<Eigen::MatrixXd> dtilde;  // spectral side, degree k -> k+1
    std::vector<Eigen::MatrixXd> delta;   // cell side in hat bases
    std::vector<double> deviation;        // ||F[k] - I||_max
    double max_deviation = 0.0;
    double defect = 0.0;                  // ||delta F - F dtilde||_max
};
// throws NotSelfIndexed unless min values are 0 and max values 1
ChainMapReport f_star(const CircleLab& lab);
// one report per t, computed concurrently, ordered as t_list
std::vector<ChainMapReport> f_star_sweep(const CircleFunction& f, const std::vector<double>& t_list,
                                         const LabOptions& opt = {});

struct T2Row {
    double t = 0.0;
    std::string row, col;
    bool birth_death = false;
    bool extension = false;  // non-self-indexed: e^{t (f(x1) - f(x0))} in place of e^t
    LogReal raw;
    double rescaled = 0.0;
    double target = 0.0;
    double abs_err = 0.0;
    std::string pair() const;
};
// one CircleLab per t (parallel); nondegenerate pairs against the incidence table,
// birth-death pairs against 1
std::vector<T2Row> theorem2prime_check(const CircleFunction& f, const std::vector<double>& t_list,
                                       const LabOptions& opt = {});

std::string fstar_csv(const std::vector<ChainMapReport>& reports);
std::string theorem2prime_csv(const std::vector<T2Row>& rows);
// decimal text of a LogReal that may be far outside double range
std::string format_logreal(const LogReal& x, int digits = 12);

}  // namespace wittenlab
