#include "fcp/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "fcp/error.hpp"
#include "fcp/mittag_leffler.hpp"
#include "fcp/rl_quadrature.hpp"

namespace fcp {

// ---------------------------------------------------------------- metrics

ErrorReport error_report(const std::vector<RVec>& reference, const std::vector<CVec>& computed,
                         const RVec& t_grid) {
    if (reference.size() != computed.size() || reference.size() != t_grid.size())
        throw UsageError("error_report: time grids differ");
    ErrorReport r;
    r.t_grid = t_grid;
    r.pointwise_sup.resize(t_grid.size(), 0.0);
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        if (reference[k].size() != computed[k].size())
            throw UsageError("error_report: space grids differ at time index " + std::to_string(k));
        double e = 0.0;
        for (std::size_t j = 0; j < reference[k].size(); ++j)
            e = std::max(e, std::abs(computed[k][j] - reference[k][j]));
        r.pointwise_sup[k] = e;
        r.sup_norm = std::max(r.sup_norm, e);
    }
    return r;
}

ErrorReport error_report(const std::vector<RVec>& reference, const SolveResult& computed) {
    ErrorReport r = error_report(reference, computed.states, computed.times);
    r.params = computed.metadata;
    return r;
}

RVec uniform_grid(double lo, double hi, int n) {
    if (n < 1) throw UsageError("grid needs at least one point");
    RVec g(static_cast<std::size_t>(n));
    if (n == 1) {
        g[0] = lo;
        return g;
    }
    for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
    g.back() = hi;
    return g;
}

double default_horizon(double alpha) { return alpha <= 1.0 ? 1.0 : 5.0; }

double laplacian_eigenvalue(double a, double L, int k) {
    return a * kPi * kPi * k * k / (L * L);
}

namespace {

double horizon(double T, double alpha) { return T > 0.0 ? T : default_horizon(alpha); }

std::vector<RVec> modes_on_grid(const std::vector<int>& ks, double L, const RVec& x) {
    std::vector<RVec> s(ks.size(), RVec(x.size()));
    for (std::size_t i = 0; i < ks.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) s[i][j] = std::sin(kPi * ks[i] * x[j] / L);
    return s;
}

// sum_i c_i(t) phi_i(x) for every time.
std::vector<CVec> synthesize(const SolveResult& r, const std::vector<RVec>& phi) {
    std::vector<CVec> out(r.states.size());
    for (std::size_t k = 0; k < r.states.size(); ++k) {
        CVec u(phi.empty() ? 0 : phi[0].size(), cplx(0.0));
        for (std::size_t i = 0; i < phi.size(); ++i)
            for (std::size_t j = 0; j < u.size(); ++j) u[j] += r.states[k][i] * phi[i][j];
        out[k] = std::move(u);
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------- Example 1

RVec ex1_reference(double alpha, double a, double L, int k0, int k1, double t, const RVec& x_grid) {
    const double l0 = laplacian_eigenvalue(a, L, k0);
    const double l1 = laplacian_eigenvalue(a, L, k1);
    const double ta = std::pow(t, alpha);
    const double c0 = ml(alpha, 1.0, -l0 * ta);
    // The u1 term carries the factor t: S_{alpha,2}(t) = t E_{alpha,2}(-lambda t^alpha).
    const double c1 = alpha > 1.0 ? t * ml(alpha, 2.0, -l1 * ta) : 0.0;
    RVec u(x_grid.size());
    for (std::size_t j = 0; j < x_grid.size(); ++j)
        u[j] = c0 * std::sin(kPi * k0 * x_grid[j] / L) + c1 * std::sin(kPi * k1 * x_grid[j] / L);
    return u;
}

ErrorReport ex1_error(double alpha, int N, const Ex1Setup& s) {
    const double T = horizon(s.T, alpha);
    const RVec times = uniform_grid(0.0, T, s.n_times);
    const RVec x = uniform_grid(0.0, s.L, s.n_x);
    const DiagonalOperator op({laplacian_eigenvalue(s.a, s.L, s.k0),
                               laplacian_eigenvalue(s.a, s.L, s.k1)},
                              s.phi_s);
    HomogeneousConfig cfg;
    cfg.alpha = alpha;
    cfg.gamma = s.gamma;
    cfg.N = N;
    cfg.contour.phi_s = s.phi_s;
    cfg.half_contour = s.half_contour;
    std::optional<CVec> u1;
    if (alpha > 1.0) u1 = CVec{0.0, 1.0};
    const SolveResult r = solve_homogeneous(op, {1.0, 0.0}, u1, cfg, times);

    std::vector<RVec> ref(times.size());
    for (std::size_t k = 0; k < times.size(); ++k)
        ref[k] = ex1_reference(alpha, s.a, s.L, s.k0, s.k1, times[k], x);
    ErrorReport rep = error_report(ref, synthesize(r, modes_on_grid({s.k0, s.k1}, s.L, x)), times);
    rep.params = r.metadata;
    rep.params["example"] = 1;
    rep.params["a"] = s.a;
    rep.params["T"] = T;
    return rep;
}

// ---------------------------------------------------------------- Example 2

RVec ex2_reference(double alpha, const RVec& coeffs, const std::vector<int>& modes, double a,
                   double L, int N_I, double t, const RVec& x_grid) {
    if (coeffs.size() != modes.size()) throw UsageError("ex2: coeffs and modes differ in length");
    RVec amp(coeffs.size(), 0.0);
    if (t > 0.0) {
        const int NJ = static_cast<int>(std::ceil(N_I / std::min(1.0, alpha)));
        const RlQuadrature rl = rl_build(alpha, NJ, kDefaultRlD);
        const double ta = std::pow(t, alpha);
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            const double lam = laplacian_eigenvalue(a, L, modes[i]);
            if (i == 0) {
                // c0 J_alpha[E_alpha(-lambda s^alpha)](t)
                amp[i] = coeffs[i] * rl_apply(rl, t, ScalarFn([&](double s) {
                             return ml(alpha, 1.0, -lam * std::pow(s, alpha));
                         }));
            } else {
                const double ci = std::tgamma(i + 1.0) / std::tgamma(alpha + i) * coeffs[i];
                const double p = alpha + static_cast<double>(i) - 1.0;
                const double I = sinc_01(
                    ScalarFn([&](double sig) {
                        const double w = std::pow(1.0 - sig, alpha);
                        return ml(alpha, 1.0, -lam * ta * w) * std::pow(t * sig, p);
                    }),
                    N_I, kDefaultRlD);
                amp[i] = ci * t * I;
            }
        }
    }
    RVec u(x_grid.size(), 0.0);
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        for (std::size_t j = 0; j < x_grid.size(); ++j)
            u[j] += amp[i] * std::sin(kPi * modes[i] * x_grid[j] / L);
    return u;
}

RVec ex2_closed_form_modes(double alpha, const RVec& coeffs, const std::vector<int>& modes,
                           double a, double L, double t) {
    RVec amp(coeffs.size(), 0.0);
    if (t == 0.0) return amp;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const double lam = laplacian_eigenvalue(a, L, modes[i]);
        const double fi = static_cast<double>(i);
        amp[i] = coeffs[i] * std::tgamma(fi + 1.0) * std::pow(t, alpha + fi) *
                 ml(alpha, alpha + fi + 1.0, -lam * std::pow(t, alpha));
    }
    return amp;
}

SolveResult ex2_solve(double alpha, int N, const Ex2Setup& s, const RVec& times) {
    if (s.coeffs.size() != s.modes.size()) throw UsageError("ex2: coeffs and modes differ");
    const std::size_t n = s.modes.size();
    RVec eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = laplacian_eigenvalue(s.a, s.L, s.modes[i]);
    const DiagonalOperator op(eig, s.phi_s);
    // f(t) = sum_i c_i t^i e_i, so f(0) = c_0 e_0 and f'(t) = sum_{i>=1} i c_i t^{i-1} e_i.
    CVec f0(n, 0.0);
    f0[0] = s.coeffs[0];
    ForcingDerivative fp;
    for (std::size_t i = 1; i < n; ++i) {
        CVec v(n, 0.0);
        v[i] = static_cast<double>(i) * s.coeffs[i];
        const double e = static_cast<double>(i) - 1.0;
        fp.terms.push_back({[e](double t) { return e == 0.0 ? 1.0 : std::pow(t, e); }, v});
    }
    InhomogeneousConfig cfg;
    cfg.alpha = alpha;
    cfg.chi = s.chi;
    cfg.N = N;
    cfg.contour.phi_s = s.phi_s;
    return solve_inhomogeneous(op, f0, fp, cfg, times);
}

ErrorReport ex2_error(double alpha, int N, const Ex2Setup& s) {
    const double T = horizon(s.T, alpha);
    const RVec times = uniform_grid(0.0, T, s.n_times);
    const RVec x = uniform_grid(0.0, s.L, s.n_x);
    const SolveResult r = ex2_solve(alpha, N, s, times);
    std::vector<RVec> ref(times.size());
    for (std::size_t k = 0; k < times.size(); ++k)
        ref[k] = ex2_reference(alpha, s.coeffs, s.modes, s.a, s.L, s.N_I, times[k], x);
    ErrorReport rep = error_report(ref, synthesize(r, modes_on_grid(s.modes, s.L, x)), times);
    rep.params = r.metadata;
    rep.params["example"] = 2;
    rep.params["N_I"] = s.N_I;
    rep.params["T"] = T;
    return rep;
}

// ---------------------------------------------------------------- Example 3

Ex3Problem ex3_build(double delta, double b, double alpha, std::size_t m) {
    if (!(delta > 1.0)) throw UsageError("ex3 needs delta > 1");
    if (!(alpha > 0.0 && alpha < 2.0)) throw UsageError("alpha must lie in (0,2)");
    Ex3Problem p;
    p.delta = delta;
    p.b = b;
    p.alpha = alpha;
    p.m = m;
    p.op = std::make_shared<FdLaplacian1D>(m, 1.0, 1.0);
    p.x = p.op->grid();
    return p;
}

double Ex3Problem::u(double t, double xx) const {
    return xx * xx * (xx - 1.0) * (xx - std::pow(t, delta) - b);
}

double Ex3Problem::u_t(double t, double xx) const {
    return -xx * xx * (xx - 1.0) * delta * std::pow(t, delta - 1.0);
}

double Ex3Problem::caputo_u(double t, double xx) const {
    return -std::tgamma(delta + 1.0) / std::tgamma(delta + 1.0 - alpha) *
           std::pow(t, delta - alpha) * xx * xx * (xx - 1.0);
}

double Ex3Problem::Au(double t, double xx) const {
    const double c = std::pow(t, delta) + b;
    // u = x^4 - (1+c) x^3 + c x^2
    return -(12.0 * xx * xx - 6.0 * (1.0 + c) * xx + 2.0 * c);
}

double Ex3Problem::f(double t, double xx) const {
    const double td = std::pow(t, delta);
    return 6.0 * td * xx - 2.0 * td -
           std::pow(t, delta - alpha) * std::tgamma(delta + 1.0) /
               std::tgamma(delta + 1.0 - alpha) * xx * xx * (xx - 1.0) -
           12.0 * xx * xx + 6.0 * xx * (b + 1.0) - 2.0 * b;
}

double Ex3Problem::fprime(double t, double xx) const {
    const double t1 = std::pow(t, delta - 1.0);
    return 6.0 * delta * t1 * xx - 2.0 * delta * t1 -
           std::pow(t, delta - alpha - 1.0) * (delta - alpha) * std::tgamma(delta + 1.0) /
               std::tgamma(delta + 1.0 - alpha) * xx * xx * (xx - 1.0);
}

namespace {

template <class F>
CVec sample_interior(const Ex3Problem& p, F&& fn) {
    CVec v(p.m - 2);
    for (std::size_t i = 1; i + 1 < p.m; ++i) v[i - 1] = fn(p.x[i]);
    return v;
}

}  // namespace

CVec Ex3Problem::u0_interior() const {
    return sample_interior(*this, [&](double xx) { return u(0.0, xx); });
}

CVec Ex3Problem::u1_interior() const {
    return sample_interior(*this, [&](double xx) { return u_t(0.0, xx); });
}

CVec Ex3Problem::f0_interior() const {
    return sample_interior(*this, [&](double xx) { return f(0.0, xx); });
}

ForcingDerivative Ex3Problem::fprime_separable() const {
    const double d = delta;
    const double a = alpha;
    const double c = (d - a) * std::tgamma(d + 1.0) / std::tgamma(d + 1.0 - a);
    ForcingDerivative fp;
    fp.terms.push_back({[d](double t) { return std::pow(t, d - 1.0); },
                        sample_interior(*this, [&](double xx) { return 6.0 * d * xx - 2.0 * d; })});
    fp.terms.push_back({[d, a](double t) { return std::pow(t, d - a - 1.0); },
                        sample_interior(*this, [&](double xx) { return -c * xx * xx * (xx - 1.0); })});
    return fp;
}

VecFn Ex3Problem::fprime_generic() const {
    const Ex3Problem self = *this;
    return [self](double t) {
        return sample_interior(self, [&](double xx) { return self.fprime(t, xx); });
    };
}

RVec Ex3Problem::u_grid(double t) const {
    RVec v(m);
    for (std::size_t i = 0; i < m; ++i) v[i] = u(t, x[i]);
    v.front() = 0.0;
    v.back() = 0.0;
    return v;
}

SolveResult ex3_solve(double alpha, int N, const Ex3Setup& s, const RVec& times) {
    const Ex3Problem p = ex3_build(s.delta, s.b, alpha, s.m);
    SolveConfig cfg;
    cfg.hom.alpha = alpha;
    cfg.hom.gamma = s.gamma;
    cfg.hom.N = N;
    cfg.hom.contour.phi_s = s.phi_s;
    cfg.inhom.alpha = alpha;
    cfg.inhom.chi = s.chi;
    cfg.inhom.N = N;
    cfg.inhom.contour.phi_s = s.phi_s;
    std::optional<CVec> u1;
    if (alpha > 1.0) u1 = p.u1_interior();
    SolveResult r =
        solve(*p.op, p.u0_interior(), u1, p.f0_interior(), p.fprime_separable(), cfg, times);
    for (auto& st : r.states) st = p.op->with_boundary(st);
    return r;
}

ErrorReport ex3_error(double alpha, int N, const Ex3Setup& s) {
    const RVec times = uniform_grid(0.0, s.T, s.n_times);
    const Ex3Problem p = ex3_build(s.delta, s.b, alpha, s.m);
    const SolveResult r = ex3_solve(alpha, N, s, times);
    std::vector<RVec> ref(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) ref[k] = p.u_grid(times[k]);
    ErrorReport rep = error_report(ref, r);
    rep.params["example"] = 3;
    rep.params["m"] = s.m;
    rep.params["delta"] = s.delta;
    rep.params["b"] = s.b;
    return rep;
}

// ---------------------------------------------------------------- oracle

// Predictor-corrector product integration (rectangle predictor, trapezoid
// corrector) on the Volterra form u = T(t) + J_alpha (f - lambda u).
Trajectory fabm_oracle(double alpha, double lambda, const ScalarFn& f, double u0, double u1,
                       int n_steps, double T) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw UsageError("alpha must lie in (0,2)");
    if (n_steps < 16) throw UsageError("fabm_oracle needs n_steps >= 16");
    if (!(T > 0.0)) throw UsageError("fabm_oracle needs T > 0");
    const std::size_t n = static_cast<std::size_t>(n_steps);
    const double h = T / n_steps;
    RVec pa(n + 2), pa1(n + 2);
    for (std::size_t k = 0; k < n + 2; ++k) {
        pa[k] = std::pow(static_cast<double>(k), alpha);
        pa1[k] = std::pow(static_cast<double>(k), alpha + 1.0);
    }
    const double cp = std::pow(h, alpha) / std::tgamma(alpha + 1.0);
    const double cc = std::pow(h, alpha) / std::tgamma(alpha + 2.0);
    const bool wave = alpha > 1.0;

    Trajectory tr;
    tr.t.resize(n + 1);
    tr.u.resize(n + 1);
    RVec F(n + 1);
    tr.t[0] = 0.0;
    tr.u[0] = u0;
    F[0] = f(0.0) - lambda * u0;
    for (std::size_t s = 0; s < n; ++s) {
        const double t1 = (s + 1) * h;
        const double taylor = u0 + (wave ? t1 * u1 : 0.0);
        double pred = 0.0;
        for (std::size_t j = 0; j <= s; ++j) pred += (pa[s + 1 - j] - pa[s - j]) * F[j];
        const double up = taylor + cp * pred;
        const double sd = static_cast<double>(s);
        double corr = (pa1[s] - (sd - alpha) * pa[s + 1]) * F[0];
        for (std::size_t j = 1; j <= s; ++j)
            corr += (pa1[s - j + 2] + pa1[s - j] - 2.0 * pa1[s - j + 1]) * F[j];
        const double fn = f(t1);
        const double un = taylor + cc * (corr + fn - lambda * up);
        tr.t[s + 1] = t1;
        tr.u[s + 1] = un;
        F[s + 1] = fn - lambda * un;
    }
    tr.t[n] = T;
    return tr;
}

// ---------------------------------------------------------------- sweeps

ErrorReport run_cell(const SweepSpec& spec, double alpha, int N) {
    switch (spec.problem) {
        case Problem::ex1: return ex1_error(alpha, N, spec.ex1);
        case Problem::ex2: return ex2_error(alpha, N, spec.ex2);
        case Problem::ex3: return ex3_error(alpha, N, spec.ex3);
    }
    throw UsageError("unknown problem");
}

std::vector<SweepRow> convergence_sweep(const SweepSpec& spec, const RVec& alphas,
                                        const std::vector<int>& Ns) {
    std::vector<SweepRow> rows;
    for (double a : alphas) {
        for (int N : Ns) {
            SweepRow row;
            row.alpha = a;
            row.N = N;
            try {
                row.sup_err = run_cell(spec, a, N).sup_norm;
            } catch (const std::exception& e) {
                row.sup_err = std::nan("");
                row.error = e.what();
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "alpha,N,sup_err\n";
    for (const auto& r : rows) os << fmt17(r.alpha) << ',' << r.N << ',' << fmt17(r.sup_err) << '\n';
    return os.str();
}

std::string error_vs_t_csv(double alpha, int N, const ErrorReport& r) {
    std::ostringstream os;
    os << "alpha,N,t,sup_err_x\n";
    for (std::size_t k = 0; k < r.t_grid.size(); ++k)
        os << fmt17(alpha) << ',' << N << ',' << fmt17(r.t_grid[k]) << ','
           << fmt17(r.pointwise_sup[k]) << '\n';
    return os.str();
}

}  // namespace fcp
