#pragma once

#include <functional>
#include <optional>

#include "fcp/types.hpp"

namespace fcp {

// psi(p) = e^p / (1 + e^p) and friends, stable for large |p|.
struct SigmoidMap {
    static double psi(double p);
    static double one_minus_psi(double p);  // 1/(1+e^p), evaluated directly
    static double dpsi(double p);           // psi(p)(1 - psi(p))
};

inline constexpr double kDefaultRlD = kPi / 4.0;

// Sinc rule for J_alpha v(t) = (1/Gamma(alpha)) int_0^t (t-s)^{alpha-1} v(s) ds
// after s = t psi(p).
struct RlQuadrature {
    double alpha = 1.0;
    int N = 1;
    double d = kDefaultRlD;
    double eps = 1.0;
    double delta = 1.0;
    double h = 0.0;
    int k_lo = 0;  // nodes k in [k_lo, k_hi]
    int k_hi = 0;
    double inv_gamma_alpha = 1.0;
    RVec weights;  // w_k = e^{kh} / (1 + e^{kh})^{alpha+1}
    RVec psi;      // psi(kh)

    std::size_t size() const { return weights.size(); }
    double node(std::size_t i) const { return (k_lo + static_cast<int>(i)) * h; }
    // Scalar factor multiplying v(t psi_i) in the rule at time t.
    double coefficient(std::size_t i, double t) const;
};

// eps/delta default to min(1, alpha) and min(1/alpha, 1). h_override replaces
// sqrt(2 pi d / (eps N)); the inhomogeneous solver uses it to share one step.
RlQuadrature rl_build(double alpha, int N, double d = kDefaultRlD,
                      std::optional<double> eps_override = std::nullopt,
                      std::optional<double> delta_override = std::nullopt,
                      std::optional<double> h_override = std::nullopt);

// Explicit node range [-k_neg, k_pos] with step h.
RlQuadrature rl_build_range(double alpha, int k_neg, int k_pos, double h);

using VecFn = std::function<CVec(double)>;
using ScalarFn = std::function<double(double)>;

CVec rl_apply(const RlQuadrature& q, double t, const VecFn& v);
double rl_apply(const RlQuadrature& q, double t, const ScalarFn& v);

int adaptive_terms(int N0, double t, double t0, double alpha, double d, double eps);

// int_0^1 g(s) ds via s = psi(p), step sqrt(2 pi d / N), nodes k in [-N, N].
CVec sinc_01(const VecFn& g, int N, double d = kDefaultRlD);
double sinc_01(const ScalarFn& g, int N, double d = kDefaultRlD);

}  // namespace fcp
