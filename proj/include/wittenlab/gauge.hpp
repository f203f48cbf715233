#pragma once
#include <cmath>
#include <vector>

#include "wittenlab/eigensolve.hpp"
#include "wittenlab/witten.hpp"

namespace wittenlab {

// sign * e^{log}; sign 0 means exactly zero
struct LogReal {
    double sign = 0.0;
    double log = -INFINITY;

    static LogReal from(double x);
    double value() const { return sign == 0.0 ? 0.0 : sign * std::exp(log); }
    LogReal operator*(const LogReal& o) const;
    LogReal scaled(double log_factor) const { return {sign, log + log_factor}; }
};

// sum_i s_i e^{tau_i}; terms with s_i = 0 are skipped
LogReal log_sum(const std::vector<double>& tau, const std::vector<double>& s);

// e^{log_scale} * m with max|m| = 1 after renormalize()
struct ScaledVector {
    double log_scale = 0.0;
    std::vector<double> m;

    void renormalize();
    bool zero() const;
};

// sum_j coeff_j * x_j, done in log space
ScaledVector combine(const std::vector<const ScaledVector*>& xs, const std::vector<double>& coeffs);

// Gauge coordinates for the conjugated scheme:
//   0-forms  w = e^{tf} u      (operator S^2 D0^T S_mid^{-2} D0, rows sum to 0)
//   1-forms  p = e^{-tf_mid} v (operator S_mid^{-2} D0 S^2 D0^T)
// Constants are exact kernels in both, and entries stay O(1/h^2) for any t.
class Gauge {
public:
    explicit Gauge(const WittenMatrices& W);

    const WittenMatrices& matrices() const { return *W_; }
    const GenTridiag& op(int degree) const { return degree == 0 ? G0_ : G1_; }
    // log of the weight turning gauge mantissas into the physical h-inner product
    double log_weight(int degree, int i) const {
        return degree == 0 ? -2.0 * t_ * W_->f_nodes[i] : 2.0 * t_ * W_->f_mids[i];
    }

    LogReal inner(const ScaledVector& x, const ScaledVector& y, int degree) const;
    double log_norm(const ScaledVector& x, int degree) const;
    ScaledVector normalized(ScaledVector x, int degree) const;

    // d(t) in gauge: p = e^{-2 t f_mid} D0 w
    ScaledVector d(const ScaledVector& w) const;
    // <v, D u>_h for v (1-form gauge) and u (0-form gauge)
    LogReal pair_d(const ScaledVector& p, const ScaledVector& w) const;

    // physical <-> gauge; to_physical may underflow far from the bulk
    ScaledVector from_physical(const std::vector<double>& u, int degree) const;
    std::vector<double> to_physical(const ScaledVector& x, int degree) const;
    // from log|u_i| and signs of a physical vector
    ScaledVector from_log_physical(const std::vector<double>& log_abs, const std::vector<double>& sign,
                                   int degree) const;

    // (G - sigma)^{-1} x with scale tracking
    ScaledVector resolvent(const ScaledVector& x, int degree, double sigma) const;

    // weighted mass of x on the index set where mask is true, as a fraction of the total
    double mass_fraction(const ScaledVector& x, int degree, const std::vector<char>& mask) const;

private:
    const WittenMatrices* W_;
    double t_;
    GenTridiag G0_, G1_;
};

}  // namespace wittenlab
