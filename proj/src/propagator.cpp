#include "fcp/propagator.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "fcp/error.hpp"
#include "fcp/parallel.hpp"

namespace fcp {

std::pair<double, double> step_sizes(int N, double alpha, double gamma, double d) {
    if (N < 1 || !(d > 0.0) || !(alpha * gamma > 0.0))
        throw UsageError("step_sizes needs N >= 1, d > 0, alpha*gamma > 0");
    return {std::sqrt(2.0 * kPi * d / (alpha * gamma * N)), std::sqrt(2.0 * kPi * d / N)};
}

ContourNodes make_nodes(const ContourParams& c, double alpha, int N, double h, bool half) {
    if (N < 0) throw UsageError("node count must be >= 0");
    if (!(h > 0.0)) throw UsageError("quadrature step must be positive");
    ContourNodes n;
    n.N = N;
    n.h = h;
    n.half = half;
    const int lo = half ? 0 : -N;
    for (int m = lo; m <= N; ++m) {
        const double xi = m * h;
        const cplx z = contour_point(c, xi);
        const cplx lz = std::log(z);
        n.m.push_back(m);
        n.z.push_back(z);
        n.zp.push_back(contour_derivative(c, xi));
        n.z_alpha.push_back(std::exp(alpha * lz));
        n.z_am1.push_back(std::exp((alpha - 1.0) * lz));
        n.z_am2.push_back(std::exp((alpha - 2.0) * lz));
    }
    return n;
}

bool is_real(const CVec& v) {
    for (const auto& x : v)
        if (x.imag() != 0.0) return false;
    return true;
}

PropagatorPlan build_plan(const SectorialOperator& op, double alpha, int beta, const CVec& x,
                          const ContourParams& contour, int N, double h, bool half_contour) {
    if (beta != 1 && beta != 2) throw UsageError("beta must be 1 or 2");
    if (x.size() != op.dim()) throw UsageError("argument vector does not match operator dim");
    for (const auto& v : x)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw UsageError("argument vector has non-finite entries");

    PropagatorPlan plan;
    plan.contour = contour;
    plan.alpha = alpha;
    plan.beta = beta;
    plan.x = x;
    plan.real_data = is_real(x) && op.conjugate_symmetric();
    if (half_contour && !plan.real_data)
        throw UsageError("half-contour mode needs real data and a conjugate-symmetric operator");
    plan.nodes = make_nodes(contour, alpha, N, h, half_contour);

    const ContourNodes& nd = plan.nodes;
    plan.F.resize(nd.size());
    parallel_for(nd.size(), [&](std::size_t i) {
        CVec v;
        try {
            v = op.resolvent_solve(nd.z_alpha[i], x);
        } catch (const NumericalError& e) {
            char buf[128];
            std::snprintf(buf, sizeof buf, " (contour node m=%d, z=(%.6g%+.6gi))", nd.m[i],
                          nd.z[i].real(), nd.z[i].imag());
            throw NumericalError(e.what() + std::string(buf));
        }
        if (beta == 1) {
            const cplx inv_z = 1.0 / nd.z[i];
            for (std::size_t j = 0; j < v.size(); ++j) v[j] = nd.z_am1[i] * v[j] - inv_z * x[j];
        } else {
            const cplx c = nd.zp[i] * nd.z_am2[i];
            for (auto& vj : v) vj *= c;
        }
        plan.F[i] = std::move(v);
    });
    plan.resolvent_solves = nd.size();
    return plan;
}

CVec evaluate(const PropagatorPlan& plan, double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw UsageError("evaluate needs finite t >= 0");
    const ContourNodes& nd = plan.nodes;
    const std::size_t n = plan.x.size();
    CVec out(n, cplx(0.0));

    if (nd.half) {
        // (h/pi) (F(0)/2 + Re sum_{k>=1} F(kh)), with G = F / i.
        RVec acc(n, 0.0);
        for (std::size_t i = 0; i < nd.size(); ++i) {
            cplx c = std::exp(nd.z[i] * t);
            if (plan.beta == 1) c *= nd.zp[i];
            const double wgt = nd.m[i] == 0 ? 0.5 : 1.0;
            for (std::size_t j = 0; j < n; ++j) acc[j] += wgt * (c * plan.F[i][j]).imag();
        }
        const double s = nd.h / kPi;
        for (std::size_t j = 0; j < n; ++j) {
            out[j] = s * acc[j];
            if (plan.beta == 1) out[j] += plan.x[j];
        }
        return out;
    }

    RVec mag(n, 0.0);
    for (std::size_t i = 0; i < nd.size(); ++i) {
        cplx c = std::exp(nd.z[i] * t);
        if (plan.beta == 1) c *= nd.zp[i];
        for (std::size_t j = 0; j < n; ++j) {
            const cplx term = c * plan.F[i][j];
            out[j] += term;
            mag[j] += std::abs(term);
        }
    }
    const cplx s = nd.h / (2.0 * kPi * cplx(0.0, 1.0));
    const double smag = nd.h / (2.0 * kPi);
    for (std::size_t j = 0; j < n; ++j) {
        out[j] *= s;
        if (plan.beta == 1) out[j] += plan.x[j];
    }
    if (plan.real_data) {
        for (std::size_t j = 0; j < n; ++j) {
            const double scale = std::abs(out[j].real()) + smag * mag[j];
            if (std::abs(out[j].imag()) > kImagResidueTol * scale) {
                char buf[160];
                std::snprintf(buf, sizeof buf,
                              "imaginary residue %.3e exceeds tolerance at component %zu, t=%.6g",
                              out[j].imag(), j, t);
                throw NumericalError(buf);
            }
            out[j] = out[j].real();
        }
    }
    return out;
}

double scalar_contour_sum(double alpha, double beta, double lambda, double t,
                          const ContourParams& contour, int N, double h) {
    cplx acc = 0.0;
    for (int m = -N; m <= N; ++m) {
        const double xi = m * h;
        const cplx z = contour_point(contour, xi);
        const cplx lz = std::log(z);
        const cplx f = std::exp((alpha - beta) * lz) / (std::exp(alpha * lz) + lambda);
        acc += contour_derivative(contour, xi) * std::exp(z * t) * f;
    }
    return (acc * (h / (2.0 * kPi * cplx(0.0, 1.0)))).real();
}

double s2_value_check(double lambda, double alpha, double t, int N, double phi_s) {
    if (!(alpha > 1.0 && alpha < 2.0)) throw UsageError("s2_value_check needs alpha in (1,2)");
    const ContourParams c = contour_params(alpha, {lambda, phi_s});
    const double h2 = step_sizes(N, alpha, 1.0, c.d).second;
    const ScalarOperator op(lambda);
    const PropagatorPlan plan = build_plan(op, alpha, 2, {cplx(1.0)}, c, N, h2, false);
    return evaluate(plan, t)[0].real();
}

}  // namespace fcp
