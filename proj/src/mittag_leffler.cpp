#include "fcp/mittag_leffler.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "fcp/contour.hpp"
#include "fcp/error.hpp"
#include "fcp/types.hpp"

namespace fcp {

double gamma_real(double x) {
    if (!(x > 0.0)) throw UsageError("gamma_real needs x > 0");
    return std::tgamma(x);
}

namespace {

// The series also covers alpha = 2 (E_{2,1}(-x^2) = cos x); the contour needs alpha < 2.
void check_params(double alpha, double beta, bool allow_two = false) {
    if (!(alpha > 0.0 && (alpha < 2.0 || (allow_two && alpha == 2.0))))
        throw UsageError(allow_two ? "Mittag-Leffler alpha must lie in (0,2]"
                                   : "Mittag-Leffler alpha must lie in (0,2)");
    if (!(beta > 0.0)) throw UsageError("Mittag-Leffler beta must be positive");
}

// log of the largest |z|^k / Gamma(alpha k + beta) over k. The sequence is
// concave in k (lgamma is convex), so the scan stops at the first decrease or
// as soon as the running maximum passes cap.
double log_peak_term(double alpha, double beta, double az,
                     double cap = std::numeric_limits<double>::infinity()) {
    if (az == 0.0) return -std::lgamma(beta);
    const double lz = std::log(az);
    double best = -std::numeric_limits<double>::infinity();
    for (int k = 0;; ++k) {
        const double v = k * lz - std::lgamma(alpha * k + beta);
        if (v < best) break;
        best = v;
        if (best > cap) break;
    }
    return best;
}

}  // namespace

double ml_series(double alpha, double beta, double z, double tol) {
    check_params(alpha, beta, true);
    if (z > 0.0) throw UsageError("ml_series supports z <= 0 only");
    const double az = -z;
    const double limit = std::log(kMlSeriesPeakLimit);
    if (log_peak_term(alpha, beta, az, limit) > limit)
        throw NumericalError("ml_series: |z| too large for a stable series, use ml_contour");
    if (az == 0.0) return 1.0 / std::tgamma(beta);

    const double lz = std::log(az);
    // Gamma(x) is increasing once x passes ~1.4616.
    constexpr double kGammaMin = 1.4616321449683623;
    double sum = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 1000000; ++k) {
        const double arg = alpha * k + beta;
        const double mag = std::exp(k * lz - std::lgamma(arg));
        sum += (k % 2 == 0) ? mag : -mag;
        if (arg > kGammaMin && mag < prev && mag <= tol * std::abs(sum)) break;
        prev = mag;
    }
    return sum;
}

namespace {

// Lambda-independent part of the contour sum for one (alpha, beta):
// c_m = (h / 2 pi i) z'_m e^{z_m} z_m^{alpha-beta} and w_m = z_m^alpha.
struct MlTable {
    double alpha = 0.0;
    double beta = 0.0;
    std::vector<cplx> c;
    std::vector<cplx> w;
};

MlTable build_table(double alpha, double beta) {
    const MlContourSettings s;
    const ContourParams cp = contour_params(alpha, {1.0, s.phi_s}, s.a0);
    // Truncate where e^{Re z} has decayed by e^{-threshold} rather than at the
    // d-optimal step: the scalar integrand is analytic well beyond the strip.
    const double xi_max = std::acosh(std::max(1.0, (s.threshold + s.a0) / cp.aI));
    const double h = xi_max / s.N;
    MlTable t;
    t.alpha = alpha;
    t.beta = beta;
    const cplx pre = h / (2.0 * kPi * cplx(0.0, 1.0));
    for (int m = -s.N; m <= s.N; ++m) {
        const double xi = m * h;
        const cplx z = contour_point(cp, xi);
        const cplx lz = std::log(z);
        t.c.push_back(pre * contour_derivative(cp, xi) * std::exp(z + (alpha - beta) * lz));
        t.w.push_back(std::exp(alpha * lz));
    }
    return t;
}

const MlTable& table_for(double alpha, double beta) {
    thread_local std::vector<MlTable> cache;
    for (const auto& t : cache)
        if (t.alpha == alpha && t.beta == beta) return t;
    if (cache.size() >= 16) cache.erase(cache.begin());
    cache.push_back(build_table(alpha, beta));
    return cache.back();
}

}  // namespace

double ml_contour(double alpha, double beta, double lambda) {
    check_params(alpha, beta);
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw UsageError("ml_contour needs lambda > 0");
    const MlTable& t = table_for(alpha, beta);
    cplx acc = 0.0;
    for (std::size_t i = 0; i < t.c.size(); ++i) acc += t.c[i] / (t.w[i] + lambda);
    return acc.real();
}

double ml(double alpha, double beta, double z) {
    check_params(alpha, beta);
    if (z > 0.0) throw UsageError("ml supports z <= 0 only");
    if (z == 0.0) return 1.0 / std::tgamma(beta);
    const double az = -z;
    // Beyond |z| = 2 the series stays in use while its terms are small enough
    // (alpha near 2, where the contour strip collapses).
    const double peak = log_peak_term(alpha, beta, az, std::log(kMlSeriesPeakLimit));
    if (peak <= std::log(kMlSeriesPeakLimit) && (az <= 2.0 || peak <= std::log(1e4)))
        return ml_series(alpha, beta, z);
    return ml_contour(alpha, beta, az);
}

}  // namespace fcp
