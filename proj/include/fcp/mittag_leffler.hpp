#pragma once

namespace fcp {

double gamma_real(double x);

// Taylor series for E_{alpha,beta}(z), z <= 0. Refuses when the largest term
// exceeds kMlSeriesPeakLimit, since cancellation would then eat the digits.
double ml_series(double alpha, double beta, double z, double tol = 1e-17);

inline constexpr double kMlSeriesPeakLimit = 1e6;

// E_{alpha,beta}(-lambda) from the scalar contour sum at t = 1.
double ml_contour(double alpha, double beta, double lambda);

// Series when |z| <= 2 or the series is well conditioned, contour otherwise.
double ml(double alpha, double beta, double z);

// Contour settings used by ml_contour.
struct MlContourSettings {
    int N = 512;
    double a0 = 4.0;
    double phi_s = 1e-4;
    double threshold = 40.0;  // e^{Re z} at the last node is about e^{-threshold}
};

}  // namespace fcp
