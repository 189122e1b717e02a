#include <doctest.h>

#include <cstdio>
#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

using fcp::cli::run;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args) {
    std::ostringstream o, e;
    const int c = run(args, o, e);
    return {c, o.str(), e.str()};
}

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    f << text;
}

double max_sup_err(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    double m = 0.0;
    while (std::getline(in, line)) m = std::max(m, std::stod(line.substr(line.rfind(',') + 1)));
    return m;
}

}  // namespace

TEST_CASE("help and version") {
    const auto r = call({});
    CHECK(r.code == 2);
    CHECK(r.out.find("Subcommands") != std::string::npos);
    CHECK(call({"--help"}).code == 0);
    const auto v = call({"--version"});
    CHECK(v.code == 0);
    CHECK(v.out.find("fcp ") == 0);
}

TEST_CASE("usage errors") {
    const auto r = call({"ex1", "--alpha", "2.5"});
    CHECK(r.code == 2);
    CHECK(r.err.find("(0,2)") != std::string::npos);
    CHECK(call({"ex1", "--bogus"}).code == 2);
    CHECK(call({"nosuch"}).code == 2);
    CHECK(call({"ex1", "--workers", "0"}).code == 2);
    CHECK(call({"contour", "--alpha", "1"}).code == 2);
    CHECK(call({"sweep", "--alphas", "0.5,3"}).code == 2);
    CHECK(call({"solve", "--config", "does-not-exist.json"}).code == 2);
}

TEST_CASE("contour subcommand") {
    const auto r = call({"contour", "--alpha", "1.3", "--phi-s", "0.5236"});
    REQUIRE(r.code == 0);
    const std::string last = r.out.substr(r.out.rfind('{'));
    const auto j = nlohmann::json::parse(last);
    CHECK(std::abs(j.at("phi_alpha").get<double>() - 2.0138) <= 1e-4);
    CHECK(std::abs(j.at("d").get<double>() - 0.2215) <= 1e-4);
    CHECK(std::abs(j.at("aI").get<double>() - 0.2683) <= 1e-4);
    CHECK(std::abs(j.at("bI").get<double>() - 1.19154) <= 1e-4);
    CHECK(r.out.find("aI        = ") != std::string::npos);
    const auto bad = call({"contour", "--alpha", "1.9", "--phi-s", "1.0472"});
    CHECK(bad.code == 1);
}

TEST_CASE("ml subcommand") {
    const auto r = call({"ml", "--alpha", "0.5", "--z", "-1"});
    REQUIRE(r.code == 0);
    CHECK(std::abs(std::stod(r.out) - 0.4275835762) <= 1e-8);
    CHECK(call({"ml", "--alpha", "0.5", "--z", "1"}).code == 2);
}

TEST_CASE("ex1 writes CSV and metadata atomically") {
    const std::string out = "cli_ex1.csv";
    std::remove(out.c_str());
    const auto r = call({"ex1", "--alpha", "1", "--N", "64", "--a", "1", "--out", out});
    REQUIRE(r.code == 0);
    const std::string csv = slurp(out);
    CHECK(csv.rfind("alpha,N,t,sup_err_x\n", 0) == 0);
    CHECK(max_sup_err(csv) <= 1e-4);
    const auto meta = nlohmann::json::parse(slurp(out + ".meta.json"));
    CHECK(meta.contains("workers"));
    CHECK(meta.contains("wall_time_s"));
    CHECK(meta.at("N1") == 64);
    CHECK(meta.contains("contour"));
    CHECK(meta.contains("operator"));
}

TEST_CASE("worker count does not change the bytes") {
    const auto a = call({"ex3", "--alpha", "1.5", "--N", "32", "--m", "30", "--n-times", "20", "--workers", "1"});
    const auto b = call({"ex3", "--alpha", "1.5", "--N", "32", "--m", "30", "--n-times", "20", "--workers", "8"});
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.err.find("meta: ") == 0);
}

TEST_CASE("sweep subcommand") {
    const auto r = call({"sweep", "--problem", "ex1", "--alphas", "0.5,1", "--Ns", "16,32"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("alpha,N,sup_err\n", 0) == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 5);
    CHECK(call({"sweep", "--problem", "ex9"}).code == 2);
}

TEST_CASE("solve from a config file") {
    spit("cli_cfg.json", R"({
        "operator": {"kind": "scalar", "lambda": 9.869604401089358},
        "alpha": 1.0, "N": 64,
        "times": [0.0, 0.1, 1.0],
        "u0": [1.0]
    })");
    const auto r = call({"solve", "--config", "cli_cfg.json", "--out", "cli_solve.csv", "--workers", "auto"});
    REQUIRE(r.code == 0);
    std::istringstream in(slurp("cli_solve.csv"));
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,x_index,value_re,value_im");
    int rows = 0;
    while (std::getline(in, line)) {
        std::stringstream ls(line);
        std::string t, j, re, im;
        std::getline(ls, t, ',');
        std::getline(ls, j, ',');
        std::getline(ls, re, ',');
        std::getline(ls, im, ',');
        CHECK(std::abs(std::stod(re) - std::exp(-9.869604401089358 * std::stod(t))) <= 1e-6);
        ++rows;
    }
    CHECK(rows == 3);
    const auto meta = nlohmann::json::parse(slurp("cli_solve.csv.meta.json"));
    CHECK(meta.at("solver").at("homogeneous").at("N1") == 64);
    CHECK(meta.contains("gamma"));

    // Flag overrides file values.
    const auto o = call({"solve", "--config", "cli_cfg.json", "--N", "16"});
    CHECK(o.code == 0);
    CHECK(o.err.find("\"N\":16") != std::string::npos);

    spit("cli_bad.json", R"({"operator": {"kind": "scalar"}, "times": [1], "colour": 3})");
    const auto b = call({"solve", "--config", "cli_bad.json"});
    CHECK(b.code == 2);
    CHECK(b.err.find("colour") != std::string::npos);

    spit("cli_bad2.json", R"({"operator": {"kind": "scalar", "lambda": 1}, "alpha": 0.5, "times": [1], "u0": [1], "u1": [1]})");
    CHECK(call({"solve", "--config", "cli_bad2.json"}).code == 2);

    spit("cli_ex3.json", R"({
        "operator": {"kind": "fd_laplacian_1d", "m": 12},
        "alpha": 1.5, "N": 32,
        "times": {"t_max": 1, "n_times": 3},
        "u0": {"builtin": "ex3"}, "u1": {"builtin": "ex3"},
        "rhs": {"f0": {"builtin": "ex3"}, "fprime": {"builtin": "ex3"}}
    })");
    CHECK(call({"solve", "--config", "cli_ex3.json"}).code == 0);

    spit("cli_pow.json", R"({
        "operator": {"kind": "diagonal", "eigenvalues": [1, 4]},
        "alpha": 0.8, "N": 32, "times": [0.5],
        "rhs": {"f0": [1, 0], "fprime": {"builtin": "power_terms",
                "params": {"terms": [{"power": 0.5, "vector": [0, 1]}]}}}
    })");
    CHECK(call({"solve", "--config", "cli_pow.json"}).code == 0);
}
