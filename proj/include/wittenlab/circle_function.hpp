#pragma once
#include <string>
#include <vector>

namespace wittenlab {

struct CriticalPoint {
    enum class Kind { Min, Max, BirthDeath };
    double theta = 0.0;      // in [0, 2pi)
    Kind kind = Kind::Min;
    double f_value = 0.0;
    double curvature = 0.0;  // f''/2 at nondegenerate points
    double a = 0.0;          // f'''/6 at birth-death points
    std::string label;       // "min0", "max1", "bd0", ...

    int index() const { return kind == Kind::Max ? 1 : 0; }
    bool is_bd() const { return kind == Kind::BirthDeath; }
};

// f on S^1 with f' a finite trigonometric polynomial
//   f'(theta) = scale * sum_{k>=1} (p_k cos k theta + q_k sin k theta)
// and f = scale * F + offset for the mean-free antiderivative F.
class CircleFunction {
public:
    CircleFunction() = default;
    CircleFunction(std::vector<double> p, std::vector<double> q, double scale, double offset);

    double value(double theta) const;
    double d1(double theta) const;
    double d2(double theta) const;
    double d3(double theta) const;

    const std::vector<CriticalPoint>& critical_points() const { return critical_; }
    std::vector<CriticalPoint> minima() const;
    std::vector<CriticalPoint> maxima() const;
    std::vector<CriticalPoint> birth_deaths() const;
    const CriticalPoint& by_label(const std::string& label) const;

    // alpha*f + beta
    CircleFunction affine(double alpha, double beta) const;
    double min_value() const;
    double max_value() const;
    bool self_indexed(double tol = 1e-9) const;

    const std::vector<double>& p() const { return p_; }
    const std::vector<double>& q() const { return q_; }
    std::vector<double> simple_zeros, double_zeros;  // after the mean-zero adjustment

    // classification from the zero lists; fills critical_points()
    void classify();

private:
    std::vector<double> p_, q_;
    double scale_ = 1.0, offset_ = 0.0;
    std::vector<CriticalPoint> critical_;
};

// f'(theta) = prod_simple 2 sin((theta-z)/2) * prod_double 4 sin^2((theta-phi)/2);
// the last simple zero is moved by root finding so that f' has mean zero.
CircleFunction build_circle_function(const std::vector<double>& simple_zeros,
                                     const std::vector<double>& double_zeros);

// alpha f + beta with min value 0, max value 1; every minimum must share one
// value and every maximum another (else NotAffinelySelfIndexable).
CircleFunction affine_self_index(const CircleFunction& f);

// alpha f + beta with global min 0 and global max 1 (no sharing requirement).
CircleFunction normalize_range(const CircleFunction& f);

// Named examples shipped with the library ("A", "B").
struct ExampleSpec {
    std::string name;
    std::vector<double> simple_zeros, double_zeros;
    bool self_index = true;
};
ExampleSpec named_example(const std::string& name);
CircleFunction make_function(const ExampleSpec& spec);

}  // namespace wittenlab
