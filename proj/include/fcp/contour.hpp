#pragma once

#include <string>
#include <utility>

#include "fcp/types.hpp"

namespace fcp {

// Spectrum of A lies in {rho_s + r e^{i theta} : |theta| <= phi_s}.
struct SpectralParams {
    double rho_s = 1.0;
    double phi_s = kPi / 60.0;
};

// Hyperbola z(xi) = a0 - aI cosh(xi) + i bI sinh(xi) and its strip half-height d.
struct ContourParams {
    double a0 = 0.0;
    double aI = 0.0;
    double bI = 0.0;
    double d = 0.0;
    double phi_alpha = 0.0;
    double phi_c = 0.0;
};

inline constexpr double kDefaultA0 = kPi / 6.0;
inline constexpr double kDefaultPhiC = kPi / 2.0;

ContourParams contour_params(double alpha, const SpectralParams& spectral,
                             double a0 = kDefaultA0, double phi_c = kDefaultPhiC);

cplx contour_point(const ContourParams& p, double xi);
// Analytic continuation into the strip, used for the Re z(i d) = 0 identity.
cplx contour_point(const ContourParams& p, cplx xi);
cplx contour_derivative(const ContourParams& p, double xi);

// (a(nu), b(nu)) of the hyperbola obtained by shifting xi -> xi + i nu.
std::pair<double, double> shifted_hyperbola(const ContourParams& p, double nu);

std::string to_string(const ContourParams& p);

}  // namespace fcp
