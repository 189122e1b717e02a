#include "fcp/solver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>

#include "fcp/error.hpp"
#include "fcp/parallel.hpp"

namespace fcp {

namespace {

using Clock = std::chrono::steady_clock;

// Ceiling that ignores representation noise such as 0.3 * 10 = 3.0000000000000004.
int ceil_count(double x) {
    const double r = std::round(x);
    if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) return static_cast<int>(r);
    return static_cast<int>(std::ceil(x));
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw UsageError("alpha must lie in (0,2)");
}

void check_times(const RVec& times) {
    for (double t : times)
        if (!(t >= 0.0) || !std::isfinite(t)) throw UsageError("times must be finite and >= 0");
}

ContourParams make_contour(double alpha, const ContourInputs& in, const SectorialOperator& op) {
    return contour_params(alpha, {op.spectral().rho_s, in.phi_s}, in.a0, in.phi_c);
}

// Accumulates (h / 2 pi i) sum_m c_m and tracks term magnitudes for the
// imaginary-residue check on real data.
struct ContourSum {
    CVec acc;
    RVec mag;
    explicit ContourSum(std::size_t n) : acc(n, cplx(0.0)), mag(n, 0.0) {}

    void add(cplx c, const CVec& v) {
        for (std::size_t j = 0; j < v.size(); ++j) {
            const cplx term = c * v[j];
            acc[j] += term;
            mag[j] += std::abs(term);
        }
    }
    void finish(double h) {
        const cplx s = h / (2.0 * kPi * cplx(0.0, 1.0));
        for (auto& x : acc) x *= s;
        for (auto& x : mag) x *= h / (2.0 * kPi);
    }
};

void drop_imaginary(CVec& u, const RVec& mag, double t) {
    for (std::size_t j = 0; j < u.size(); ++j) {
        const double scale = std::abs(u[j].real()) + mag[j];
        if (std::abs(u[j].imag()) > kImagResidueTol * scale) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "imaginary residue %.3e exceeds tolerance at component %zu, t=%.6g",
                          u[j].imag(), j, t);
            throw NumericalError(buf);
        }
        u[j] = u[j].real();
    }
}

}  // namespace

nlohmann::json to_json(const ContourParams& c) {
    return {{"a0", c.a0},       {"aI", c.aI},         {"bI", c.bI},
            {"d", c.d},         {"phi_alpha", c.phi_alpha}, {"phi_c", c.phi_c}};
}

// ---------------------------------------------------------------- homogeneous

HomogeneousParams homogeneous_params(const HomogeneousConfig& cfg, const SpectralParams& spectral) {
    check_alpha(cfg.alpha);
    if (cfg.N < 1) throw UsageError("N must be >= 1");
    if (!(cfg.gamma > 0.0)) throw UsageError("gamma must be positive");
    HomogeneousParams p;
    p.contour = contour_params(cfg.alpha, {spectral.rho_s, cfg.contour.phi_s}, cfg.contour.a0,
                               cfg.contour.phi_c);
    p.N1 = cfg.N;
    p.N2 = std::max(1, ceil_count(cfg.alpha * cfg.gamma * cfg.N));
    p.h1 = step_sizes(p.N1, cfg.alpha, cfg.gamma, p.contour.d).first;
    // S_{alpha,2} with N2 nodes uses its own step sqrt(2 pi d / N2).
    p.h2 = step_sizes(p.N2, cfg.alpha, cfg.gamma, p.contour.d).second;
    return p;
}

SolveResult solve_homogeneous(const SectorialOperator& op, const CVec& u0,
                              const std::optional<CVec>& u1, const HomogeneousConfig& cfg,
                              const RVec& times) {
    const auto start = Clock::now();
    check_alpha(cfg.alpha);
    check_times(times);
    if (u1 && cfg.alpha <= 1.0) throw UsageError("u1 is only allowed for alpha > 1");
    if (u0.size() != op.dim()) throw UsageError("u0 does not match operator dim");

    const HomogeneousParams hp = homogeneous_params(cfg, {op.spectral().rho_s, cfg.contour.phi_s});
    const PropagatorPlan p1 =
        build_plan(op, cfg.alpha, 1, u0, hp.contour, hp.N1, hp.h1, cfg.half_contour);
    std::optional<PropagatorPlan> p2;
    if (u1) p2 = build_plan(op, cfg.alpha, 2, *u1, hp.contour, hp.N2, hp.h2, cfg.half_contour);

    SolveResult res;
    res.times = times;
    res.states.resize(times.size());
    parallel_for(times.size(), [&](std::size_t k) {
        CVec u = evaluate(p1, times[k]);
        if (p2) {
            const CVec v = evaluate(*p2, times[k]);
            for (std::size_t j = 0; j < u.size(); ++j) u[j] += v[j];
        }
        res.states[k] = std::move(u);
    });

    const double wall = std::chrono::duration<double>(Clock::now() - start).count();
    res.metadata = {{"part", "homogeneous"},
                    {"operator", op.describe()},
                    {"alpha", cfg.alpha},
                    {"gamma", cfg.gamma},
                    {"N", cfg.N},
                    {"N1", hp.N1},
                    {"N2", u1 ? hp.N2 : 0},
                    {"h1", hp.h1},
                    {"h2", hp.h2},
                    {"phi_s", cfg.contour.phi_s},
                    {"half_contour", cfg.half_contour},
                    {"contour", to_json(hp.contour)},
                    {"resolvent_solves", p1.resolvent_solves + (p2 ? p2->resolvent_solves : 0)},
                    {"wall_time_s", wall}};
    return res;
}

// -------------------------------------------------------------- inhomogeneous

InhomogeneousParams inhom_params(int N, double alpha, double chi, double d) {
    check_alpha(alpha);
    if (N < 1) throw UsageError("N must be >= 1");
    if (!(chi > 0.0)) throw UsageError("chi must be positive");
    if (!(d > 0.0)) throw UsageError("d must be positive");
    InhomogeneousParams p;
    const double base = alpha * chi * N;
    p.N1 = p.N4 = std::max(1, ceil_count(base));
    p.N3 = N;
    p.N0 = p.N2 = p.N5 = std::max(1, ceil_count(base / std::min(1.0, alpha)));
    p.h = std::sqrt(2.0 * kPi * d / base);
    return p;
}

ForcingDerivative ForcingDerivative::zero() { return {}; }

CVec ForcingDerivative::operator()(double t, std::size_t dim) const {
    if (generic) return generic(t);
    CVec out(dim, cplx(0.0));
    for (const auto& term : terms) {
        const double g = term.g(t);
        for (std::size_t j = 0; j < dim; ++j) out[j] += g * term.v[j];
    }
    return out;
}

CVec g_kernel(cplx z, double t, double p, const RlQuadrature& rl, const VecFn& fprime) {
    if (t < 0.0) throw UsageError("g_kernel needs t >= 0");
    const double s = t * SigmoidMap::psi(p);
    CVec j = rl_apply(rl, s, fprime);
    if (t == 0.0) return j;  // rl_apply already returned zeros
    const cplx c = t * SigmoidMap::dpsi(p) * std::exp(z * t * SigmoidMap::one_minus_psi(p));
    for (auto& x : j) x *= c;
    return j;
}

namespace {

struct InhomContext {
    const SectorialOperator* op = nullptr;
    const ForcingDerivative* fp = nullptr;
    InhomogeneousConfig cfg;
    InhomogeneousParams ip;
    ContourParams contour;
    ContourNodes nodes;  // m in [-N3, N3]; shared with term (i) since N3 = N
    RlQuadrature rl0;    // outer RL rule of term (i)
    RlQuadrature rl2;    // inner RL rule for J~ f'
    PropagatorPlan plan_f0;
    // Separable path: B[m][r] = z^{alpha-1} R(z^alpha) v_r - v_r / z.
    std::vector<std::vector<CVec>> basis;
    std::size_t dim = 0;
    bool real_data = false;
};

RlQuadrature inner_rule(const InhomContext& c, int n, double h) {
    const double a = c.cfg.alpha;
    if (c.cfg.alg2_literal) {
        const int m1 = ceil_count(n * std::min(1.0, a));
        const int m2 = ceil_count(n * std::min(1.0 / a, 1.0));
        return rl_build_range(a, m1, m2, h);
    }
    return rl_build(a, n, c.contour.d, std::nullopt, std::nullopt, h);
}

// a_l = h t psi'(lh) J~ f'(t psi(lh)) for l in [-nl, nl]. Separable data give
// one coefficient per term (scalars[l][r]); generic data give vectors.
struct GValues {
    std::vector<RVec> scalars;
    std::vector<CVec> vectors;
    RVec one_minus_psi;
};

GValues g_values(const InhomContext& c, double t, int nl) {
    const double h = c.ip.h;
    const double a = c.cfg.alpha;
    GValues g;
    const std::size_t n = static_cast<std::size_t>(2 * nl + 1);
    g.one_minus_psi.resize(n);
    std::map<int, RlQuadrature> adaptive_rules;
    const double t0 = t * SigmoidMap::psi(nl * h);
    const bool sep = c.fp->separable();
    if (sep)
        g.scalars.resize(n);
    else
        g.vectors.resize(n);

    for (std::size_t i = 0; i < n; ++i) {
        const double p = (static_cast<int>(i) - nl) * h;
        const double s = t * SigmoidMap::psi(p);
        const double coef = h * t * SigmoidMap::dpsi(p);
        g.one_minus_psi[i] = SigmoidMap::one_minus_psi(p);

        const RlQuadrature* rl = &c.rl2;
        if (c.cfg.adaptive) {
            const int na = adaptive_terms(c.ip.N2, s, t0, a, c.contour.d, c.rl2.eps);
            auto it = adaptive_rules.find(na);
            if (it == adaptive_rules.end()) {
                const double ha = na == c.ip.N2 ? h : std::sqrt(2.0 * kPi * c.contour.d /
                                                               (c.rl2.eps * na));
                it = adaptive_rules.emplace(na, inner_rule(c, na, ha)).first;
            }
            rl = &it->second;
        }
        try {
            if (sep) {
                RVec& row = g.scalars[i];
                row.resize(c.fp->terms.size());
                for (std::size_t r = 0; r < row.size(); ++r)
                    row[r] = coef * rl_apply(*rl, s, c.fp->terms[r].g);
            } else {
                CVec j = rl_apply(*rl, s, c.fp->generic);
                if (j.size() != c.dim) throw UsageError("f'(t) has the wrong dimension");
                for (auto& x : j) x *= coef;
                g.vectors[i] = std::move(j);
            }
        } catch (const NumericalError& e) {
            char buf[96];
            std::snprintf(buf, sizeof buf, " (outer node l=%d, t=%.6g)",
                          static_cast<int>(i) - nl, t);
            throw NumericalError(e.what() + std::string(buf));
        }
    }
    return g;
}

CVec inhom_at(const InhomContext& c, double t) {
    const std::size_t dim = c.dim;
    if (t == 0.0) return CVec(dim, cplx(0.0));
    const double a = c.cfg.alpha;
    const double h = c.ip.h;
    const ContourNodes& nd = c.nodes;
    const std::size_t nm = nd.size();

    // Term (i): J~^{N0} applied to S~(t psi_l) f(0), summed node-first.
    const double pre0 = std::pow(t, a) * c.rl0.h * c.rl0.inv_gamma_alpha;
    double wsum = 0.0;
    for (double w : c.rl0.weights) wsum += w;
    CVec u(dim);
    for (std::size_t j = 0; j < dim; ++j) u[j] = pre0 * wsum * c.plan_f0.x[j];

    ContourSum cs(dim);
    for (std::size_t m = 0; m < nm; ++m) {
        cplx cm = 0.0;
        for (std::size_t l = 0; l < c.rl0.size(); ++l)
            cm += c.rl0.weights[l] * std::exp(t * c.rl0.psi[l] * nd.z[m]);
        cs.add(pre0 * cm * nd.zp[m], c.plan_f0.F[m]);
    }

    // Terms (ii) and (iii).
    const GValues g2 = g_values(c, t, c.ip.N1);
    const GValues g4 = (c.ip.N4 == c.ip.N1) ? GValues{} : g_values(c, t, c.ip.N4);
    const GValues& gv4 = (c.ip.N4 == c.ip.N1) ? g2 : g4;

    if (c.fp->separable()) {
        const std::size_t nr = c.fp->terms.size();
        RVec s2(nr, 0.0);
        for (const auto& row : g2.scalars)
            for (std::size_t r = 0; r < nr; ++r) s2[r] += row[r];
        for (std::size_t r = 0; r < nr; ++r)
            for (std::size_t j = 0; j < dim; ++j) u[j] += s2[r] * c.fp->terms[r].v[j];

        std::vector<cplx> cr(nr);
        for (std::size_t m = 0; m < nm; ++m) {
            std::fill(cr.begin(), cr.end(), cplx(0.0));
            for (std::size_t l = 0; l < gv4.scalars.size(); ++l) {
                const cplx e = std::exp(t * nd.z[m] * gv4.one_minus_psi[l]);
                for (std::size_t r = 0; r < nr; ++r) cr[r] += e * gv4.scalars[l][r];
            }
            for (std::size_t r = 0; r < nr; ++r) cs.add(cr[r] * nd.zp[m], c.basis[m][r]);
        }
    } else {
        for (const auto& v : g2.vectors)
            for (std::size_t j = 0; j < dim; ++j) u[j] += v[j];

        CVec fm(dim);
        for (std::size_t m = 0; m < nm; ++m) {
            std::fill(fm.begin(), fm.end(), cplx(0.0));
            for (std::size_t l = 0; l < gv4.vectors.size(); ++l) {
                const cplx e = std::exp(t * nd.z[m] * gv4.one_minus_psi[l]);
                for (std::size_t j = 0; j < dim; ++j) fm[j] += e * gv4.vectors[l][j];
            }
            CVec v;
            try {
                v = c.op->resolvent_solve(nd.z_alpha[m], fm);
            } catch (const NumericalError& e) {
                throw NumericalError(e.what() + std::string(" (contour node m=") +
                                     std::to_string(nd.m[m]) + ")");
            }
            const cplx inv_z = 1.0 / nd.z[m];
            for (std::size_t j = 0; j < dim; ++j) v[j] = nd.z_am1[m] * v[j] - inv_z * fm[j];
            cs.add(nd.zp[m], v);
        }
    }

    cs.finish(h);
    for (std::size_t j = 0; j < dim; ++j) u[j] += cs.acc[j];
    bool real = c.real_data;
    if (real && !c.fp->separable()) {
        for (const auto& v : g2.vectors) real = real && is_real(v);
        for (const auto& v : gv4.vectors) real = real && is_real(v);
    }
    if (real) {
        // Term (i) and (ii) pieces already in u are real; only the contour part can leak.
        drop_imaginary(u, cs.mag, t);
    }
    return u;
}

}  // namespace

SolveResult solve_inhomogeneous(const SectorialOperator& op, const CVec& f0,
                                const ForcingDerivative& fprime, const InhomogeneousConfig& cfg,
                                const RVec& times) {
    const auto start = Clock::now();
    check_alpha(cfg.alpha);
    check_times(times);
    if (f0.size() != op.dim()) throw UsageError("f(0) does not match operator dim");
    for (const auto& term : fprime.terms) {
        if (term.v.size() != op.dim()) throw UsageError("f' term does not match operator dim");
        if (!term.g) throw UsageError("f' term has no time factor");
    }

    InhomContext c;
    c.op = &op;
    c.fp = &fprime;
    c.cfg = cfg;
    c.dim = op.dim();
    c.contour = make_contour(cfg.alpha, cfg.contour, op);
    c.ip = inhom_params(cfg.N, cfg.alpha, cfg.chi, c.contour.d);
    c.nodes = make_nodes(c.contour, cfg.alpha, c.ip.N3, c.ip.h, false);
    c.rl0 = inner_rule(c, c.ip.N0, c.ip.h);
    c.rl2 = inner_rule(c, c.ip.N2, c.ip.h);
    c.plan_f0 = build_plan(op, cfg.alpha, 1, f0, c.contour, c.ip.N3, c.ip.h, false);

    bool real = op.conjugate_symmetric() && is_real(f0);
    std::size_t solves = c.plan_f0.resolvent_solves;
    if (fprime.separable()) {
        for (const auto& term : fprime.terms) real = real && is_real(term.v);
        const std::size_t nm = c.nodes.size();
        c.basis.assign(nm, {});
        parallel_for(nm, [&](std::size_t m) {
            const ContourNodes& nd = c.nodes;
            const cplx inv_z = 1.0 / nd.z[m];
            auto& row = c.basis[m];
            row.reserve(fprime.terms.size());
            for (const auto& term : fprime.terms) {
                CVec v;
                try {
                    v = op.resolvent_solve(nd.z_alpha[m], term.v);
                } catch (const NumericalError& e) {
                    throw NumericalError(e.what() + std::string(" (contour node m=") +
                                         std::to_string(nd.m[m]) + ")");
                }
                for (std::size_t j = 0; j < v.size(); ++j)
                    v[j] = nd.z_am1[m] * v[j] - inv_z * term.v[j];
                row.push_back(std::move(v));
            }
        });
        solves += nm * fprime.terms.size();
    }
    c.real_data = real;

    SolveResult res;
    res.times = times;
    res.states.resize(times.size());
    parallel_for(times.size(), [&](std::size_t k) { res.states[k] = inhom_at(c, times[k]); });
    if (!fprime.separable()) {
        std::size_t positive = 0;
        for (double t : times) positive += t > 0.0;
        solves += positive * c.nodes.size();
    }

    const double wall = std::chrono::duration<double>(Clock::now() - start).count();
    res.metadata = {{"part", "inhomogeneous"},
                    {"operator", op.describe()},
                    {"alpha", cfg.alpha},
                    {"chi", cfg.chi},
                    {"N", cfg.N},
                    {"N0", c.ip.N0},
                    {"N1", c.ip.N1},
                    {"N2", c.ip.N2},
                    {"N3", c.ip.N3},
                    {"N4", c.ip.N4},
                    {"N5", c.ip.N5},
                    {"h", c.ip.h},
                    {"rl_nodes", {c.rl0.k_lo, c.rl0.k_hi}},
                    {"phi_s", cfg.contour.phi_s},
                    {"adaptive", cfg.adaptive},
                    {"alg2_literal", cfg.alg2_literal},
                    {"separable_rhs", fprime.separable()},
                    {"contour", to_json(c.contour)},
                    {"resolvent_solves", solves},
                    {"wall_time_s", wall}};
    return res;
}

SolveResult solve(const SectorialOperator& op, const CVec& u0, const std::optional<CVec>& u1,
                  const CVec& f0, const ForcingDerivative& fprime, const SolveConfig& cfg,
                  const RVec& times) {
    SolveResult hom = solve_homogeneous(op, u0, u1, cfg.hom, times);
    SolveResult inh = solve_inhomogeneous(op, f0, fprime, cfg.inhom, times);
    for (std::size_t k = 0; k < times.size(); ++k)
        for (std::size_t j = 0; j < hom.states[k].size(); ++j) hom.states[k][j] += inh.states[k][j];
    SolveResult out;
    out.times = times;
    out.states = std::move(hom.states);
    out.metadata = {{"homogeneous", hom.metadata}, {"inhomogeneous", inh.metadata}};
    return out;
}

}  // namespace fcp
