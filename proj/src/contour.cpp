#include "fcp/contour.hpp"

#include <cmath>
#include <cstdio>

#include "fcp/error.hpp"

namespace fcp {

ContourParams contour_params(double alpha, const SpectralParams& spectral, double a0,
                             double phi_c) {
    const double phi_s = spectral.phi_s;
    if (!(alpha > 0.0 && alpha < 2.0)) throw UsageError("alpha must lie in (0,2)");
    if (!(a0 > 0.0)) throw UsageError("a0 must be positive");
    if (!(phi_s > 0.0 && phi_s < kPi / 2)) throw UsageError("phi_s must lie in (0, pi/2)");
    if (!(alpha * phi_s < kPi / 2)) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "contour inadmissible: alpha*phi_s = %.6g must be below pi/2",
                      alpha * phi_s);
        throw NumericalError(buf);
    }
    if (!(phi_c > phi_s / alpha && phi_c <= kPi / 2))
        throw UsageError("phi_c must lie in (phi_s/alpha, pi/2]");

    ContourParams p;
    p.a0 = a0;
    p.phi_c = phi_c;
    p.phi_alpha = std::min(kPi, (kPi - phi_s) / alpha);
    p.d = (phi_c + p.phi_alpha - kPi) / 2;
    const double tan_pa = std::tan(p.phi_alpha);
    p.aI = a0 * (std::cos(p.d) + tan_pa * std::sin(p.d));
    p.bI = a0 * (std::sin(p.d) - std::cos(p.d) * tan_pa);

    if (!(p.phi_alpha > kPi / 2)) throw NumericalError("contour inadmissible: phi_alpha <= pi/2");
    if (!(p.d > 0.0)) throw NumericalError("contour inadmissible: d <= 0");
    if (!(p.bI > 0.0)) throw NumericalError("contour inadmissible: bI <= 0");
    return p;
}

cplx contour_point(const ContourParams& p, double xi) {
    return {p.a0 - p.aI * std::cosh(xi), p.bI * std::sinh(xi)};
}

cplx contour_point(const ContourParams& p, cplx xi) {
    return p.a0 - p.aI * std::cosh(xi) + cplx(0.0, p.bI) * std::sinh(xi);
}

cplx contour_derivative(const ContourParams& p, double xi) {
    return {-p.aI * std::sinh(xi), p.bI * std::cosh(xi)};
}

std::pair<double, double> shifted_hyperbola(const ContourParams& p, double nu) {
    return {p.aI * std::cos(nu) + p.bI * std::sin(nu), p.bI * std::cos(nu) - p.aI * std::sin(nu)};
}

std::string to_string(const ContourParams& p) {
    char buf[320];
    std::snprintf(buf, sizeof buf,
                  "a0=%.17g aI=%.17g bI=%.17g d=%.17g phi_alpha=%.17g phi_c=%.17g", p.a0, p.aI,
                  p.bI, p.d, p.phi_alpha, p.phi_c);
    return buf;
}

}  // namespace fcp
