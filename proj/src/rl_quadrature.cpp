#include "fcp/rl_quadrature.hpp"

#include <cmath>
#include <string>

#include "fcp/error.hpp"

namespace fcp {

double SigmoidMap::psi(double p) {
    if (p >= 0.0) return 1.0 / (1.0 + std::exp(-p));
    const double e = std::exp(p);
    return e / (1.0 + e);
}

double SigmoidMap::one_minus_psi(double p) {
    if (p <= 0.0) return 1.0 / (1.0 + std::exp(p));
    const double e = std::exp(-p);
    return e / (1.0 + e);
}

double SigmoidMap::dpsi(double p) { return psi(p) * one_minus_psi(p); }

namespace {

// log of e^p / (1+e^p)^{alpha+1}
double log_weight(double p, double alpha) {
    if (p > 0.0) return -alpha * p - (alpha + 1.0) * std::log1p(std::exp(-p));
    return p - (alpha + 1.0) * std::log1p(std::exp(p));
}

void fill_nodes(RlQuadrature& q) {
    const std::size_t n = static_cast<std::size_t>(q.k_hi - q.k_lo + 1);
    q.weights.resize(n);
    q.psi.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double p = q.node(i);
        q.weights[i] = std::exp(log_weight(p, q.alpha));
        q.psi[i] = SigmoidMap::psi(p);
    }
    q.inv_gamma_alpha = 1.0 / std::tgamma(q.alpha);
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw UsageError("alpha must lie in (0,2)");
}

void check_sample(double value, std::size_t i) {
    if (!std::isfinite(value))
        throw NumericalError("non-finite integrand sample at quadrature node " + std::to_string(i));
}

}  // namespace

double RlQuadrature::coefficient(std::size_t i, double t) const {
    return std::pow(t, alpha) * h * inv_gamma_alpha * weights[i];
}

RlQuadrature rl_build(double alpha, int N, double d, std::optional<double> eps_override,
                      std::optional<double> delta_override, std::optional<double> h_override) {
    check_alpha(alpha);
    if (N < 1) throw UsageError("RL rule needs N >= 1");
    if (!(d > 0.0)) throw UsageError("RL rule needs d > 0");
    RlQuadrature q;
    q.alpha = alpha;
    q.N = N;
    q.d = d;
    q.eps = eps_override.value_or(std::min(1.0, alpha));
    q.delta = delta_override.value_or(std::min(1.0 / alpha, 1.0));
    if (!(q.eps > 0.0) || !(q.delta > 0.0)) throw UsageError("decay orders must be positive");
    q.h = h_override.value_or(std::sqrt(2.0 * kPi * d / (q.eps * N)));
    q.k_lo = -static_cast<int>(std::ceil(q.eps * N));
    q.k_hi = static_cast<int>(std::ceil(q.delta * N));
    fill_nodes(q);
    return q;
}

RlQuadrature rl_build_range(double alpha, int k_neg, int k_pos, double h) {
    check_alpha(alpha);
    if (k_neg < 0 || k_pos < 0 || !(h > 0.0)) throw UsageError("bad RL node range");
    RlQuadrature q;
    q.alpha = alpha;
    q.N = std::max(k_neg, k_pos);
    q.h = h;
    q.d = 0.0;
    q.eps = 0.0;
    q.delta = 0.0;
    q.k_lo = -k_neg;
    q.k_hi = k_pos;
    fill_nodes(q);
    return q;
}

CVec rl_apply(const RlQuadrature& q, double t, const VecFn& v) {
    if (t < 0.0) throw UsageError("rl_apply needs t >= 0");
    CVec acc;
    if (t == 0.0) {
        // Dimension comes from one sample; the rule itself is identically zero.
        acc = v(0.0);
        for (auto& x : acc) x = 0.0;
        return acc;
    }
    for (std::size_t i = 0; i < q.size(); ++i) {
        const CVec s = v(t * q.psi[i]);
        if (acc.empty()) acc.assign(s.size(), cplx(0.0));
        const double w = q.weights[i];
        for (std::size_t j = 0; j < s.size(); ++j) {
            check_sample(std::abs(s[j]), i);
            acc[j] += w * s[j];
        }
    }
    const double pre = std::pow(t, q.alpha) * q.h * q.inv_gamma_alpha;
    for (auto& x : acc) x *= pre;
    return acc;
}

double rl_apply(const RlQuadrature& q, double t, const ScalarFn& v) {
    if (t < 0.0) throw UsageError("rl_apply needs t >= 0");
    if (t == 0.0) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double s = v(t * q.psi[i]);
        check_sample(s, i);
        acc += q.weights[i] * s;
    }
    return std::pow(t, q.alpha) * q.h * q.inv_gamma_alpha * acc;
}

int adaptive_terms(int N0, double t, double t0, double alpha, double d, double eps) {
    if (!(t > 0.0) || t >= t0) return N0;
    const double r = std::sqrt(static_cast<double>(N0)) +
                     alpha * std::log(t / t0) / std::sqrt(2.0 * kPi * d * eps);
    if (r <= 0.0) return 1;
    const double n = std::ceil(r * r);
    if (n < 1.0) return 1;
    if (n > N0) return N0;
    return static_cast<int>(n);
}

CVec sinc_01(const VecFn& g, int N, double d) {
    if (N < 1 || !(d > 0.0)) throw UsageError("sinc_01 needs N >= 1, d > 0");
    const double h = std::sqrt(2.0 * kPi * d / N);
    CVec acc;
    for (int k = -N; k <= N; ++k) {
        const double p = k * h;
        const CVec s = g(SigmoidMap::psi(p));
        if (acc.empty()) acc.assign(s.size(), cplx(0.0));
        const double w = h * SigmoidMap::dpsi(p);
        for (std::size_t j = 0; j < s.size(); ++j) {
            check_sample(std::abs(s[j]), static_cast<std::size_t>(k + N));
            acc[j] += w * s[j];
        }
    }
    return acc;
}

double sinc_01(const ScalarFn& g, int N, double d) {
    if (N < 1 || !(d > 0.0)) throw UsageError("sinc_01 needs N >= 1, d > 0");
    const double h = std::sqrt(2.0 * kPi * d / N);
    double acc = 0.0;
    for (int k = -N; k <= N; ++k) {
        const double p = k * h;
        const double s = g(SigmoidMap::psi(p));
        check_sample(s, static_cast<std::size_t>(k + N));
        acc += h * SigmoidMap::dpsi(p) * s;
    }
    return acc;
}

}  // namespace fcp
