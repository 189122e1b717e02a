#pragma once

#include <utility>
#include <vector>

#include "fcp/contour.hpp"
#include "fcp/operator.hpp"
#include "fcp/types.hpp"

namespace fcp {

// Sinc steps for S_{alpha,1} (h1) and S_{alpha,2} (h2) with N nodes per side.
std::pair<double, double> step_sizes(int N, double alpha, double gamma, double d);

// Contour nodes z(mh), z'(mh) for m in [-N, N] (or [0, N] with half = true).
struct ContourNodes {
    int N = 0;
    double h = 0.0;
    bool half = false;
    std::vector<int> m;
    CVec z;
    CVec zp;
    // Principal powers z^alpha, z^{alpha-1}, z^{alpha-2}.
    CVec z_alpha;
    CVec z_am1;
    CVec z_am2;

    std::size_t size() const { return z.size(); }
};

ContourNodes make_nodes(const ContourParams& c, double alpha, int N, double h, bool half);

// Cached corrected integrand factors of S~_{alpha,beta}(t) x.
struct PropagatorPlan {
    ContourParams contour;
    double alpha = 1.0;
    int beta = 1;
    ContourNodes nodes;
    CVec x;
    bool real_data = false;
    // beta=1: F_m = z^{alpha-1} R(z^alpha) x - x/z. beta=2: F_m = z' z^{alpha-2} R(z^alpha) x.
    std::vector<CVec> F;
    std::size_t resolvent_solves = 0;

    int N() const { return nodes.N; }
    double h() const { return nodes.h; }
    bool half() const { return nodes.half; }
};

// True when every entry has zero imaginary part.
bool is_real(const CVec& v);

PropagatorPlan build_plan(const SectorialOperator& op, double alpha, int beta, const CVec& x,
                          const ContourParams& contour, int N, double h, bool half_contour);

// S~(t) x. For real data the imaginary residue is checked against the size of
// the summed terms and then dropped.
CVec evaluate(const PropagatorPlan& plan, double t);

// Relative imaginary residue above which real-data results are rejected.
inline constexpr double kImagResidueTol = 1e-10;

// Uncorrected scalar sum (h/2 pi i) sum z' e^{zt} z^{alpha-beta}/(z^alpha+lambda)
// for general real beta; approximates t^{beta-1} E_{alpha,beta}(-lambda t^alpha).
double scalar_contour_sum(double alpha, double beta, double lambda, double t,
                          const ContourParams& contour, int N, double h);

// Scalar S~_{alpha,2}(t) 1 for A = lambda with the default contour
// (a0 = pi/6) and h2 = sqrt(2 pi d / N). A positive scalar has its spectrum on
// the real axis, so any phi_s is valid; alpha close to 2 needs phi_s < pi(1 - alpha/2).
double s2_value_check(double lambda, double alpha, double t, int N, double phi_s = kPi / 60.0);

}  // namespace fcp
