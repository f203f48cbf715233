#pragma once
#include <vector>

#include "wittenlab/oscillator1d.hpp"

namespace wittenlab {

// Local normal form at a critical point: nondegenerate of index k in R^n, or
// birth-death of index k with cubic coefficient a along the last axis.
struct CriticalPointModel {
    enum class Kind { NonDegenerate, BirthDeath };
    Kind kind = Kind::NonDegenerate;
    int index = 0;
    int dim = 1;
    double a = 0.0;

    static CriticalPointModel nondegenerate(int k, int n);
    static CriticalPointModel birth_death(int k, int n, double a);
    bool is_bd() const { return kind == Kind::BirthDeath; }
};

// Axes (1-based, ascending) carrying a dx factor.
struct FormSector {
    std::vector<int> axes;
    int degree() const { return static_cast<int>(axes.size()); }
    bool contains(int axis) const;
    bool operator==(const FormSector&) const = default;
};

struct SectorSpectrum {
    FormSector sector;
    std::vector<double> values;
    std::vector<std::vector<int>> quantum_numbers;  // per-axis level indices
};

struct TaggedValue {
    double value;
    FormSector sector;
};

Model1D axis_operator(const CriticalPointModel& model, int axis, bool in_S, double t);

// m lowest sums of per-axis eigenvalues (best-first heap merge).
SectorSpectrum sector_spectrum(const CriticalPointModel& model, const FormSector& sector, double t, int m);

// m lowest eigenvalues on d-forms, merged over all sectors with |S| = d.
std::vector<TaggedValue> degree_spectrum(const CriticalPointModel& model, int d, double t, int m);

// All sectors of a given degree in lexicographic order.
std::vector<FormSector> sectors_of_degree(int n, int d);

// One axis factor of a product eigenform: a normalized Gaussian
// (2t/pi)^{1/4} e^{-t x^2} or a sampled anharmonic ground-state profile.
struct AxisProfile {
    bool anharmonic = false;
    double t = 1.0;
    std::vector<double> x, values;  // sampled profile (anharmonic), sum v^2 h = 1
    double operator()(double xi) const;
};

struct ProductForm {
    int degree = 0;
    std::vector<int> dx_axes;
    std::vector<AxisProfile> factors;  // one per axis
    double evaluate(const std::vector<double>& point) const;
};

struct EigenformPair {
    ProductForm lower;   // omega_k
    ProductForm upper;   // omega_{k+1}
    double value = 0.0;  // e_1 |at|^{2/3}
    double rayleigh_lower = 0.0, rayleigh_upper = 0.0;  // tensor-grid check (n <= 2)
    double norm_lower = 0.0, norm_upper = 0.0;
};

EigenformPair lowest_eigenforms(const CriticalPointModel& model, double t);

}  // namespace wittenlab
