#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fcp/operator.hpp"
#include "fcp/solver.hpp"

namespace fcp {

struct ErrorReport {
    RVec t_grid;
    RVec pointwise_sup;  // sup over space of |u - u~| per time
    double sup_norm = 0.0;
    nlohmann::json params;
};

ErrorReport error_report(const std::vector<RVec>& reference, const std::vector<CVec>& computed,
                         const RVec& t_grid);
ErrorReport error_report(const std::vector<RVec>& reference, const SolveResult& computed);

RVec uniform_grid(double lo, double hi, int n);
// Default horizon: 1 for alpha <= 1, 5 above.
double default_horizon(double alpha);

// ---- Example 1: A = -a d^2/dx^2 on (0, L), u0 = sin(pi k0 x/L), u1 = sin(pi k1 x/L).

double laplacian_eigenvalue(double a, double L, int k);

RVec ex1_reference(double alpha, double a, double L, int k0, int k1, double t, const RVec& x_grid);

struct Ex1Setup {
    double a = 1.0;
    double L = 1.0;
    int k0 = 1;
    int k1 = 4;
    double T = 0.0;  // <= 0 selects default_horizon(alpha)
    int n_times = 200;
    int n_x = 201;
    double phi_s = kPi / 60.0;
    double gamma = 1.0;
    bool half_contour = false;
};

ErrorReport ex1_error(double alpha, int N, const Ex1Setup& s);

// ---- Example 2: u0 = u1 = 0, f(t) = sum_i c_i t^i sin(pi k_i x / L).

struct Ex2Setup {
    RVec coeffs{1.0, 1.0};
    std::vector<int> modes{1, 4};
    double a = 1.0;
    double L = 1.0;
    int N_I = 256;
    double T = 0.0;
    int n_times = 200;
    int n_x = 201;
    double phi_s = kPi / 60.0;
    double chi = 1.0;
};

// Reference by sinc quadrature of the Duhamel integrals (N_I outer nodes,
// N_I / min(1, alpha) inner nodes), sampled at x_grid.
RVec ex2_reference(double alpha, const RVec& coeffs, const std::vector<int>& modes, double a,
                   double L, int N_I, double t, const RVec& x_grid);

// Modal amplitudes c_i Gamma(i+1) t^{alpha+i} E_{alpha,alpha+i+1}(-lambda_i t^alpha).
RVec ex2_closed_form_modes(double alpha, const RVec& coeffs, const std::vector<int>& modes,
                           double a, double L, double t);

SolveResult ex2_solve(double alpha, int N, const Ex2Setup& s, const RVec& times);
ErrorReport ex2_error(double alpha, int N, const Ex2Setup& s);

// ---- Example 3: manufactured u = x^2 (x-1)(x - t^delta - b) with an FD Laplacian.

struct Ex3Problem {
    double delta = 2.0;
    double b = -0.5;
    double alpha = 1.0;
    std::size_t m = 100;
    std::shared_ptr<const FdLaplacian1D> op;
    RVec x;  // all m grid nodes

    double u(double t, double xx) const;
    double u_t(double t, double xx) const;
    double caputo_u(double t, double xx) const;
    double Au(double t, double xx) const;  // -u_xx
    double f(double t, double xx) const;
    double fprime(double t, double xx) const;

    CVec u0_interior() const;
    CVec u1_interior() const;
    CVec f0_interior() const;
    ForcingDerivative fprime_separable() const;
    VecFn fprime_generic() const;
    RVec u_grid(double t) const;
};

Ex3Problem ex3_build(double delta, double b, double alpha, std::size_t m);

struct Ex3Setup {
    double delta = 2.0;
    double b = -0.5;
    std::size_t m = 100;
    double T = 1.0;
    int n_times = 200;
    double phi_s = kPi / 60.0;
    double gamma = 1.0;
    double chi = 1.0;
};

SolveResult ex3_solve(double alpha, int N, const Ex3Setup& s, const RVec& times);
ErrorReport ex3_error(double alpha, int N, const Ex3Setup& s);

// ---- Scalar brute-force oracle for d^alpha u + lambda u = f.

struct Trajectory {
    RVec t;
    RVec u;
};

Trajectory fabm_oracle(double alpha, double lambda, const ScalarFn& f, double u0, double u1,
                       int n_steps, double T);

// ---- Sweeps and CSV.

enum class Problem { ex1, ex2, ex3 };

struct SweepSpec {
    Problem problem = Problem::ex1;
    Ex1Setup ex1;
    Ex2Setup ex2;
    Ex3Setup ex3;
};

struct SweepRow {
    double alpha = 0.0;
    int N = 0;
    double sup_err = 0.0;
    std::string error;  // non-empty when the cell failed
};

ErrorReport run_cell(const SweepSpec& spec, double alpha, int N);
std::vector<SweepRow> convergence_sweep(const SweepSpec& spec, const RVec& alphas,
                                        const std::vector<int>& Ns);

std::string fmt17(double v);
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string error_vs_t_csv(double alpha, int N, const ErrorReport& r);

}  // namespace fcp
