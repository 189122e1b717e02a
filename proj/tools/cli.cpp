#include "cli.hpp"

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fcp/contour.hpp"
#include "fcp/error.hpp"
#include "fcp/experiments.hpp"
#include "fcp/mittag_leffler.hpp"
#include "fcp/parallel.hpp"
#include "fcp/solver.hpp"

#ifndef FCP_VERSION
#define FCP_VERSION "dev"
#endif

namespace fcp::cli {

using nlohmann::json;

void write_atomic(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp + " for writing");
        f << text;
        f.flush();
        if (!f) throw std::runtime_error("write failed for " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot rename " + tmp + " to " + path + ": " + ec.message());
    }
}

namespace {

using Clock = std::chrono::steady_clock;

const CLI::Validator kAlphaRange(
    [](std::string& s) -> std::string {
        double a = 0.0;
        try {
            a = std::stod(s);
        } catch (...) {
            return "alpha must be a number in the open interval (0,2)";
        }
        if (!(a > 0.0 && a < 2.0)) return "alpha must lie in the open interval (0,2), got " + s;
        return {};
    },
    "in (0,2)", "alpha");

const CLI::Validator kWorkers(
    [](std::string& s) -> std::string {
        if (s == "auto") return {};
        try {
            if (std::stoi(s) >= 1) return {};
        } catch (...) {
        }
        return "workers must be a positive integer or 'auto'";
    },
    "INT>=1|auto", "workers");

struct Common {
    std::string workers = "1";
    std::string out;
};

int resolved_workers(const Common& c) {
    return c.workers == "auto" ? hardware_workers() : std::stoi(c.workers);
}

void emit(const Common& c, const std::string& text, std::ostream& out) {
    if (c.out.empty())
        out << text;
    else
        write_atomic(c.out, text);
}

// Sidecar next to --out, or a single "meta:" line on stderr for stdout runs.
void emit_meta(const Common& c, json meta, double wall, std::ostream& err) {
    meta["workers"] = resolved_workers(c);
    meta["wall_time_s"] = wall;
    meta["version"] = FCP_VERSION;
    if (c.out.empty())
        err << "meta: " << meta.dump() << "\n";
    else
        write_atomic(c.out + ".meta.json", meta.dump(2) + "\n");
}

RVec parse_list(const std::string& s) {
    RVec v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            v.push_back(std::stod(item));
        } catch (...) {
            throw UsageError("bad number in list: " + item);
        }
    }
    if (v.empty()) throw UsageError("empty list: " + s);
    return v;
}

// ---------------------------------------------------------------- solve config

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw UsageError(where + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) throw UsageError("unknown key '" + it.key() + "' in " + where);
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw UsageError(std::string("bad value for '") + key + "': " + e.what());
    }
}

OperatorPtr make_operator(const json& j, double phi_s) {
    reject_unknown(j, {"kind", "lambda", "eigenvalues", "m", "a", "L"}, "operator");
    const std::string kind = get_or<std::string>(j, "kind", "");
    if (kind == "scalar") return std::make_shared<ScalarOperator>(get_or(j, "lambda", 1.0), phi_s);
    if (kind == "diagonal")
        return std::make_shared<DiagonalOperator>(get_or<RVec>(j, "eigenvalues", {}), phi_s);
    if (kind == "fd_laplacian_1d")
        return std::make_shared<FdLaplacian1D>(get_or<std::size_t>(j, "m", 0),
                                               get_or(j, "a", 1.0), get_or(j, "L", 1.0), phi_s);
    throw UsageError("operator.kind must be scalar, diagonal or fd_laplacian_1d");
}

// Vectors given on the full FD grid are stripped to interior values.
CVec to_state(const RVec& v, const SectorialOperator& op, const char* what) {
    CVec c(v.begin(), v.end());
    if (auto fd = dynamic_cast<const FdLaplacian1D*>(&op); fd && c.size() == fd->m())
        return fd->interior(c);
    if (c.size() != op.dim())
        throw UsageError(std::string(what) + " has " + std::to_string(c.size()) +
                         " entries, operator needs " + std::to_string(op.dim()));
    return c;
}

struct SolveInputs {
    OperatorPtr op;
    SolveConfig cfg;
    RVec times;
    CVec u0;
    std::optional<CVec> u1;
    CVec f0;
    ForcingDerivative fp;
    json resolved;
};

SolveInputs load_solve_config(const json& j, std::optional<double> alpha_flag,
                              std::optional<int> N_flag) {
    reject_unknown(j,
                   {"operator", "alpha", "gamma", "chi", "N", "a0", "phi_c", "phi_s", "times",
                    "u0", "u1", "rhs", "half_contour", "adaptive", "alg2_literal"},
                   "config");
    SolveInputs in;
    const double alpha = alpha_flag.value_or(get_or(j, "alpha", 1.0));
    if (!(alpha > 0.0 && alpha < 2.0)) throw UsageError("alpha must lie in the open interval (0,2)");
    const int N = N_flag.value_or(get_or(j, "N", 64));
    if (N < 1) throw UsageError("N must be >= 1");
    ContourInputs ci;
    ci.phi_s = get_or(j, "phi_s", ci.phi_s);
    ci.a0 = get_or(j, "a0", ci.a0);
    ci.phi_c = get_or(j, "phi_c", ci.phi_c);
    if (!j.contains("operator")) throw UsageError("config needs an 'operator' block");
    in.op = make_operator(j.at("operator"), ci.phi_s);

    in.cfg.hom.alpha = in.cfg.inhom.alpha = alpha;
    in.cfg.hom.N = in.cfg.inhom.N = N;
    in.cfg.hom.contour = in.cfg.inhom.contour = ci;
    in.cfg.hom.gamma = get_or(j, "gamma", 1.0);
    in.cfg.inhom.chi = get_or(j, "chi", 1.0);
    in.cfg.hom.half_contour = get_or(j, "half_contour", false);
    in.cfg.inhom.adaptive = get_or(j, "adaptive", false);
    in.cfg.inhom.alg2_literal = get_or(j, "alg2_literal", false);

    if (!j.contains("times")) throw UsageError("config needs 'times'");
    const json& jt = j.at("times");
    double t_max = 0.0;
    int n_times = 0;
    if (jt.is_array()) {
        in.times = jt.get<RVec>();
    } else {
        reject_unknown(jt, {"t_max", "n_times"}, "times");
        t_max = get_or(jt, "t_max", 1.0);
        n_times = get_or(jt, "n_times", 200);
        in.times = uniform_grid(0.0, t_max, n_times);
    }

    const SectorialOperator& op = *in.op;
    std::optional<Ex3Problem> ex3;
    auto ex3_for = [&](const json& b) -> const Ex3Problem& {
        auto fd = dynamic_cast<const FdLaplacian1D*>(&op);
        if (!fd) throw UsageError("builtin 'ex3' needs an fd_laplacian_1d operator");
        if (!ex3)
            ex3 = ex3_build(get_or(b, "delta", 2.0), get_or(b, "b", -0.5), alpha, fd->m());
        return *ex3;
    };
    auto vector_field = [&](const json& v, const char* what) -> CVec {
        if (v.is_array()) return to_state(v.get<RVec>(), op, what);
        reject_unknown(v, {"builtin", "delta", "b"}, what);
        if (get_or<std::string>(v, "builtin", "") != "ex3")
            throw UsageError(std::string(what) + ": builtin must be 'ex3'");
        const Ex3Problem& p = ex3_for(v);
        const std::string w = what;
        if (w == "u0") return p.u0_interior();
        if (w == "u1") return p.u1_interior();
        return p.f0_interior();
    };

    in.u0 = j.contains("u0") ? vector_field(j.at("u0"), "u0") : CVec(op.dim(), 0.0);
    if (j.contains("u1")) in.u1 = vector_field(j.at("u1"), "u1");
    in.f0 = CVec(op.dim(), 0.0);
    std::string fp_name = "zero";
    if (j.contains("rhs")) {
        const json& r = j.at("rhs");
        reject_unknown(r, {"f0", "fprime"}, "rhs");
        if (r.contains("f0")) in.f0 = vector_field(r.at("f0"), "f0");
        if (r.contains("fprime")) {
            const json& f = r.at("fprime");
            reject_unknown(f, {"builtin", "params"}, "rhs.fprime");
            fp_name = get_or<std::string>(f, "builtin", "");
            const json params = f.contains("params") ? f.at("params") : json::object();
            if (fp_name == "zero") {
            } else if (fp_name == "power_terms") {
                reject_unknown(params, {"terms"}, "rhs.fprime.params");
                for (const auto& term : get_or<json>(params, "terms", json::array())) {
                    reject_unknown(term, {"power", "vector"}, "power term");
                    const double p = get_or(term, "power", 0.0);
                    in.fp.terms.push_back({[p](double t) { return p == 0.0 ? 1.0 : std::pow(t, p); },
                                           to_state(get_or<RVec>(term, "vector", {}), op,
                                                    "power term vector")});
                }
            } else if (fp_name == "ex3") {
                reject_unknown(params, {"delta", "b"}, "rhs.fprime.params");
                in.fp = ex3_for(params).fprime_separable();
            } else {
                throw UsageError("rhs.fprime.builtin must be zero, power_terms or ex3");
            }
        }
    }

    in.resolved = {{"operator", op.describe()},
                   {"alpha", alpha},
                   {"N", N},
                   {"gamma", in.cfg.hom.gamma},
                   {"chi", in.cfg.inhom.chi},
                   {"phi_s", ci.phi_s},
                   {"a0", ci.a0},
                   {"phi_c", ci.phi_c},
                   {"n_times", in.times.size()},
                   {"half_contour", in.cfg.hom.half_contour},
                   {"adaptive", in.cfg.inhom.adaptive},
                   {"alg2_literal", in.cfg.inhom.alg2_literal},
                   {"fprime", fp_name},
                   {"u1_given", in.u1.has_value()}};
    return in;
}

std::string solution_csv(const SolveResult& r) {
    std::ostringstream os;
    os << "t,x_index,value_re,value_im\n";
    for (std::size_t k = 0; k < r.times.size(); ++k)
        for (std::size_t j = 0; j < r.states[k].size(); ++j)
            os << fmt17(r.times[k]) << ',' << j << ',' << fmt17(r.states[k][j].real()) << ','
               << fmt17(r.states[k][j].imag()) << '\n';
    return os.str();
}

// ---------------------------------------------------------------- subcommands

struct ExFlags {
    double alpha = 1.0;
    int N = 64;
    double a = 1.0;
    double L = 1.0;
    double T = 0.0;
    int n_times = 200;
    int k0 = 1;
    int k1 = 4;
    int NI = 256;
    std::size_t m = 100;
    double delta = 2.0;
    double b = -0.5;
    double phi_s = kPi / 60.0;
    bool half = false;
};

void add_ex_flags(CLI::App* sc, ExFlags& f, int example) {
    if (example != 0) {
        sc->add_option("--alpha", f.alpha, "fractional order")->check(kAlphaRange);
        sc->add_option("--N", f.N, "quadrature parameter N")->check(CLI::PositiveNumber);
    }
    sc->add_option("--T", f.T, "time horizon (default 1 for alpha<=1, 5 above; 1 for ex3)");
    sc->add_option("--n-times", f.n_times, "number of uniform output times")
        ->check(CLI::Range(2, 100000));
    sc->add_option("--phi-s", f.phi_s, "spectral half-angle");
    if (example != 3) {
        sc->add_option("--a", f.a, "diffusivity")->check(CLI::PositiveNumber);
        sc->add_option("--L", f.L, "domain length")->check(CLI::PositiveNumber);
    }
    if (example == 1) {
        sc->add_option("--k0", f.k0, "mode of u0");
        sc->add_option("--k1", f.k1, "mode of u1");
        sc->add_flag("--half-contour", f.half, "use the half-contour sums");
    }
    if (example == 2) {
        sc->add_option("--k0", f.k0, "mode of the constant forcing term");
        sc->add_option("--k1", f.k1, "mode of the linear forcing term");
        sc->add_option("--NI", f.NI, "reference quadrature nodes")->check(CLI::PositiveNumber);
    }
    if (example == 3) {
        sc->add_option("--m", f.m, "grid size")->check(CLI::Range(3, 1000000));
        sc->add_option("--delta", f.delta, "time exponent of the manufactured solution");
        sc->add_option("--b", f.b, "shift of the manufactured solution");
    }
}

SweepSpec sweep_spec(const std::string& problem, const ExFlags& f) {
    SweepSpec s;
    if (problem == "ex1") {
        s.problem = Problem::ex1;
        s.ex1.a = f.a;
        s.ex1.L = f.L;
        s.ex1.k0 = f.k0;
        s.ex1.k1 = f.k1;
        s.ex1.T = f.T;
        s.ex1.n_times = f.n_times;
        s.ex1.phi_s = f.phi_s;
        s.ex1.half_contour = f.half;
    } else if (problem == "ex2") {
        s.problem = Problem::ex2;
        s.ex2.a = f.a;
        s.ex2.L = f.L;
        s.ex2.modes = {f.k0, f.k1};
        s.ex2.N_I = f.NI;
        s.ex2.T = f.T;
        s.ex2.n_times = f.n_times;
        s.ex2.phi_s = f.phi_s;
    } else if (problem == "ex3") {
        s.problem = Problem::ex3;
        s.ex3.m = f.m;
        s.ex3.delta = f.delta;
        s.ex3.b = f.b;
        s.ex3.T = f.T > 0.0 ? f.T : 1.0;
        s.ex3.n_times = f.n_times;
        s.ex3.phi_s = f.phi_s;
    } else {
        throw UsageError("--problem must be ex1, ex2 or ex3");
    }
    return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Contour/sinc solver for fractional Cauchy problems d^alpha u + A u = f", "fcp"};
    app.require_subcommand(0, 1);
    bool version = false;
    app.add_flag("--version", version, "print build info and exit");
    Common common;

    auto add_common = [&](CLI::App* sc) {
        sc->add_option("--workers", common.workers, "worker threads (integer or 'auto')")
            ->check(kWorkers);
        sc->add_option("--out", common.out, "output file (stdout when omitted)");
    };

    // contour
    auto* sc_contour = app.add_subcommand("contour", "print hyperbolic contour parameters");
    double c_alpha = 1.0, c_phi_s = kPi / 60.0, c_a0 = kDefaultA0, c_phi_c = kDefaultPhiC;
    sc_contour->add_option("--alpha", c_alpha, "fractional order")->required()->check(kAlphaRange);
    sc_contour->add_option("--phi-s", c_phi_s, "spectral half-angle")->required();
    sc_contour->add_option("--a0", c_a0, "contour shift");
    sc_contour->add_option("--phi-c", c_phi_c, "critical angle");

    // ml
    auto* sc_ml = app.add_subcommand("ml", "evaluate the Mittag-Leffler function E_{alpha,beta}(z)");
    double m_alpha = 1.0, m_beta = 1.0, m_z = 0.0;
    sc_ml->add_option("--alpha", m_alpha, "first parameter")->required()->check(kAlphaRange);
    sc_ml->add_option("--beta", m_beta, "second parameter")->check(CLI::PositiveNumber);
    sc_ml->add_option("--z", m_z, "argument (z <= 0)")->required();

    // solve
    auto* sc_solve = app.add_subcommand("solve", "solve a problem described by a JSON config");
    std::string config_path;
    std::optional<double> s_alpha;
    std::optional<int> s_N;
    sc_solve->add_option("--config", config_path, "JSON config file")->required();
    sc_solve->add_option("--alpha", s_alpha, "override alpha")->check(kAlphaRange);
    sc_solve->add_option("--N", s_N, "override N")->check(CLI::PositiveNumber);
    add_common(sc_solve);

    // ex1..ex3
    ExFlags f1, f2, f3;
    auto* sc_ex1 = app.add_subcommand("ex1", "Example 1 error versus t");
    add_ex_flags(sc_ex1, f1, 1);
    add_common(sc_ex1);
    auto* sc_ex2 = app.add_subcommand("ex2", "Example 2 error versus t");
    add_ex_flags(sc_ex2, f2, 2);
    add_common(sc_ex2);
    auto* sc_ex3 = app.add_subcommand("ex3", "Example 3 error versus t");
    add_ex_flags(sc_ex3, f3, 3);
    add_common(sc_ex3);

    // sweep
    auto* sc_sweep = app.add_subcommand("sweep", "error versus N over a grid of alpha and N");
    ExFlags fs;
    std::string problem = "ex1", alphas_s = "0.5,1,1.5", Ns_s = "32,64,128";
    sc_sweep->add_option("--problem", problem, "ex1, ex2 or ex3");
    sc_sweep->add_option("--alphas", alphas_s, "comma-separated alpha values");
    sc_sweep->add_option("--Ns", Ns_s, "comma-separated N values");
    add_ex_flags(sc_sweep, fs, 0);
    sc_sweep->add_option("--k0", fs.k0, "first mode (ex1, ex2)");
    sc_sweep->add_option("--k1", fs.k1, "second mode (ex1, ex2)");
    sc_sweep->add_option("--NI", fs.NI, "reference quadrature nodes (ex2)")->check(CLI::PositiveNumber);
    sc_sweep->add_option("--m", fs.m, "grid size (ex3)")->check(CLI::Range(3, 1000000));
    sc_sweep->add_option("--delta", fs.delta, "time exponent of the manufactured solution (ex3)");
    sc_sweep->add_option("--b", fs.b, "shift of the manufactured solution (ex3)");
    add_common(sc_sweep);

    if (args.empty()) {
        out << app.help();
        return kUsage;
    }
    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    }

    if (version) {
        out << "fcp " << FCP_VERSION << " (C++" << __cplusplus / 100 % 100 << ", "
            << __VERSION__ << ")\n";
        return kOk;
    }

    const auto start = Clock::now();
    auto wall = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };
    try {
        set_workers(resolved_workers(common));

        if (*sc_contour) {
            const ContourParams p = contour_params(c_alpha, {1.0, c_phi_s}, c_a0, c_phi_c);
            char buf[512];
            std::snprintf(buf, sizeof buf,
                          "alpha     = %.17g\nphi_s     = %.17g\na0        = %.17g\n"
                          "aI        = %.17g\nbI        = %.17g\nd         = %.17g\n"
                          "phi_alpha = %.17g\nphi_c     = %.17g\n",
                          c_alpha, c_phi_s, p.a0, p.aI, p.bI, p.d, p.phi_alpha, p.phi_c);
            out << buf;
            json j = to_json(p);
            j["alpha"] = c_alpha;
            j["phi_s"] = c_phi_s;
            out << j.dump() << "\n";
            return kOk;
        }
        if (*sc_ml) {
            if (m_z > 0.0) throw UsageError("--z must be <= 0");
            out << fmt17(ml(m_alpha, m_beta, m_z)) << "\n";
            return kOk;
        }
        if (*sc_solve) {
            std::ifstream fin(config_path);
            if (!fin) throw UsageError("cannot read config " + config_path);
            json j;
            try {
                j = json::parse(fin);
            } catch (const json::parse_error& e) {
                throw UsageError(std::string("config is not valid JSON: ") + e.what());
            }
            SolveInputs in = load_solve_config(j, s_alpha, s_N);
            const SolveResult r =
                solve(*in.op, in.u0, in.u1, in.f0, in.fp, in.cfg, in.times);
            emit(common, solution_csv(r), out);
            json meta = in.resolved;
            meta["solver"] = r.metadata;
            emit_meta(common, meta, wall(), err);
            return kOk;
        }
        auto run_example = [&](int example, const ExFlags& f) {
            const char* names[] = {"", "ex1", "ex2", "ex3"};
            const SweepSpec spec = sweep_spec(names[example], f);
            const ErrorReport rep = run_cell(spec, f.alpha, f.N);
            emit(common, error_vs_t_csv(f.alpha, f.N, rep), out);
            json meta = rep.params;
            meta["sup_err"] = rep.sup_norm;
            emit_meta(common, meta, wall(), err);
            if (!common.out.empty()) out << "sup_err=" << fmt17(rep.sup_norm) << "\n";
        };
        if (*sc_ex1) {
            run_example(1, f1);
            return kOk;
        }
        if (*sc_ex2) {
            run_example(2, f2);
            return kOk;
        }
        if (*sc_ex3) {
            run_example(3, f3);
            return kOk;
        }
        if (*sc_sweep) {
            const SweepSpec spec = sweep_spec(problem, fs);
            const RVec alphas = parse_list(alphas_s);
            for (double a : alphas)
                if (!(a > 0.0 && a < 2.0))
                    throw UsageError("alpha must lie in the open interval (0,2)");
            std::vector<int> Ns;
            for (double n : parse_list(Ns_s)) {
                if (n < 1 || n != std::floor(n)) throw UsageError("N values must be positive integers");
                Ns.push_back(static_cast<int>(n));
            }
            const auto rows = convergence_sweep(spec, alphas, Ns);
            emit(common, sweep_csv(rows), out);
            json cells = json::array();
            bool failed = false;
            for (const auto& r : rows) {
                cells.push_back({{"alpha", r.alpha}, {"N", r.N}, {"error", r.error}});
                if (!r.error.empty()) {
                    failed = true;
                    err << "cell alpha=" << r.alpha << " N=" << r.N << " failed: " << r.error << "\n";
                }
            }
            emit_meta(common, {{"problem", problem}, {"cells", cells}}, wall(), err);
            return failed ? kNumerical : kOk;
        }
        out << app.help();
        return kUsage;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kNumerical;
    }
}

}  // namespace fcp::cli
