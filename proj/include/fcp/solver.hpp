#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "fcp/contour.hpp"
#include "fcp/operator.hpp"
#include "fcp/propagator.hpp"
#include "fcp/rl_quadrature.hpp"

namespace fcp {

struct ContourInputs {
    double phi_s = kPi / 60.0;
    double a0 = kDefaultA0;
    double phi_c = kDefaultPhiC;
};

struct HomogeneousConfig {
    double alpha = 1.0;
    double gamma = 1.0;
    int N = 64;
    ContourInputs contour;
    bool half_contour = false;
};

struct HomogeneousParams {
    ContourParams contour;
    int N1 = 0;
    int N2 = 0;
    double h1 = 0.0;
    double h2 = 0.0;
};

HomogeneousParams homogeneous_params(const HomogeneousConfig& cfg, const SpectralParams& spectral);

struct InhomogeneousConfig {
    double alpha = 1.0;
    double chi = 1.0;
    int N = 64;
    ContourInputs contour;
    // Shrinks the inner RL counts for small arguments (off by default).
    bool adaptive = false;
    // Computes the RL node ranges with the M1/M2 formulas of the algorithm listing.
    bool alg2_literal = false;
};

struct InhomogeneousParams {
    int N0 = 0, N1 = 0, N2 = 0, N3 = 0, N4 = 0, N5 = 0;
    double h = 0.0;
};

InhomogeneousParams inhom_params(int N, double alpha, double chi, double d);

// f'(t) either as a general callable or as sum_r g_r(t) v_r. The separable
// form lets the inner Riemann-Liouville sums run on scalars.
struct SeparableTerm {
    ScalarFn g;
    CVec v;
};

struct ForcingDerivative {
    VecFn generic;
    std::vector<SeparableTerm> terms;

    static ForcingDerivative zero();
    bool separable() const { return !generic; }
    CVec operator()(double t, std::size_t dim) const;
};

struct SolveResult {
    RVec times;
    std::vector<CVec> states;  // states[k] = u(times[k])
    nlohmann::json metadata;
};

SolveResult solve_homogeneous(const SectorialOperator& op, const CVec& u0,
                              const std::optional<CVec>& u1, const HomogeneousConfig& cfg,
                              const RVec& times);

// G(z, t, p) = t psi'(p) e^{z t (1 - psi(p))} J~ f'(t psi(p)).
CVec g_kernel(cplx z, double t, double p, const RlQuadrature& rl, const VecFn& fprime);

SolveResult solve_inhomogeneous(const SectorialOperator& op, const CVec& f0,
                                const ForcingDerivative& fprime, const InhomogeneousConfig& cfg,
                                const RVec& times);

struct SolveConfig {
    HomogeneousConfig hom;
    InhomogeneousConfig inhom;
};

SolveResult solve(const SectorialOperator& op, const CVec& u0, const std::optional<CVec>& u1,
                  const CVec& f0, const ForcingDerivative& fprime, const SolveConfig& cfg,
                  const RVec& times);

nlohmann::json to_json(const ContourParams& c);

}  // namespace fcp
