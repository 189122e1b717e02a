#include <doctest.h>

#include <cmath>
#include <random>

#include "fcp/contour.hpp"
#include "fcp/error.hpp"

using namespace fcp;

namespace {

// Independent route to (aI, bI): the linear system a(d) = a0 (so Re z(i d) = 0)
// and -b(d)/a(d) = tan(phi_alpha).
std::pair<double, double> solve_system(double a0, double phi_alpha, double d) {
    const double t = std::tan(phi_alpha);
    const double m11 = std::cos(d), m12 = std::sin(d);
    const double m21 = -std::sin(d) + t * std::cos(d), m22 = std::cos(d) + t * std::sin(d);
    const double det = m11 * m22 - m12 * m21;
    const double aI = (a0 * m22) / det;
    const double bI = (-a0 * m21) / det;
    return {aI, bI};
}

double asymptote_angle(double a, double b) { return std::atan2(b, -a); }

}  // namespace

TEST_CASE("alpha 1.3, phi_s pi/6") {
    const auto p = contour_params(1.3, {1.0, kPi / 6.0}, kPi / 6.0, kPi / 2.0);
    CHECK(std::abs(p.phi_alpha - 2.0138) <= 1e-4);
    CHECK(std::abs(p.d - 0.2215) <= 1e-4);
    CHECK(std::abs(p.aI - 0.2683) <= 1e-4);
    // The published bI = 1.1913 is rounded; the formulas give 1.19154.
    CHECK(std::abs(p.bI - 1.1913) <= 5e-4);
    CHECK(std::abs(p.bI - 1.1915395519564422) <= 1e-12);
    const auto [aI, bI] = solve_system(p.a0, p.phi_alpha, p.d);
    CHECK(std::abs(aI - p.aI) <= 1e-12);
    CHECK(std::abs(bI - p.bI) <= 1e-12);
}

TEST_CASE("alpha 1 with vanishing phi_s gives the symmetric hyperbola") {
    const double a0 = 0.7;
    const auto p = contour_params(1.0, {1.0, 1e-14}, a0);
    CHECK(std::abs(p.phi_alpha - kPi) <= 1e-12);
    CHECK(std::abs(p.d - kPi / 4.0) <= 1e-12);
    CHECK(std::abs(p.aI - a0 / std::sqrt(2.0)) <= 1e-12);
    CHECK(std::abs(p.bI - a0 / std::sqrt(2.0)) <= 1e-12);
}

TEST_CASE("inadmissible inputs") {
    CHECK_THROWS_AS(contour_params(1.9, {1.0, kPi / 3.0}), NumericalError);
    CHECK_THROWS_AS(contour_params(0.0, {1.0, 0.1}), UsageError);
    CHECK_THROWS_AS(contour_params(2.0, {1.0, 0.1}), UsageError);
    CHECK_THROWS_AS(contour_params(1.0, {1.0, 0.1}, -1.0), UsageError);
    CHECK_THROWS_AS(contour_params(1.0, {1.0, 0.0}), UsageError);
    CHECK_THROWS_AS(contour_params(1.0, {1.0, 0.2}, kPi / 6.0, 0.1), UsageError);
    CHECK_THROWS_AS(contour_params(1.0, {1.0, 0.2}, kPi / 6.0, 2.0), UsageError);
}

TEST_CASE("contour point") {
    const auto p = contour_params(1.3, {1.0, kPi / 6.0});
    const cplx z0 = contour_point(p, 0.0);
    CHECK(z0.imag() == 0.0);
    CHECK(std::abs(z0.real() - (p.a0 - p.aI)) <= 1e-15);
    for (double xi : {0.3, 1.0, 4.0}) {
        const cplx a = contour_point(p, xi), b = contour_point(p, -xi);
        CHECK(std::abs(a - std::conj(b)) <= 1e-14 * std::abs(a));
    }
    const cplx z1 = contour_point(p, 1.0);
    const cplx expect(p.a0 - 1.5430806348152437 * p.aI, 1.1752011936438014 * p.bI);
    CHECK(std::abs(z1 - expect) <= 1e-12);
}

TEST_CASE("contour derivative") {
    const auto p = contour_params(0.7, {1.0, 0.3});
    const cplx zp0 = contour_derivative(p, 0.0);
    CHECK(zp0.real() == 0.0);
    CHECK(zp0.imag() == doctest::Approx(p.bI));
    const double eps = 1e-5;
    for (double xi : {-2.0, 0.0, 2.0}) {
        const cplx fd = (contour_point(p, xi + eps) - contour_point(p, xi - eps)) / (2 * eps);
        CHECK(std::abs(fd - contour_derivative(p, xi)) <= 1e-6);
        CHECK(std::abs(contour_derivative(p, -xi) + std::conj(contour_derivative(p, xi))) <= 1e-14);
    }
}

TEST_CASE("shifted hyperbola") {
    const auto p = contour_params(1.3, {1.0, kPi / 6.0});
    const auto [a0n, b0n] = shifted_hyperbola(p, 0.0);
    CHECK(a0n == p.aI);
    CHECK(b0n == p.bI);
    const auto [ad, bd] = shifted_hyperbola(p, p.d);
    CHECK(std::abs(-bd / ad - std::tan(p.phi_alpha)) <= 1e-10);
    const auto [am, bm] = shifted_hyperbola(p, -p.d);
    CHECK(std::abs(am * std::sin(p.phi_c) - bm * std::cos(p.phi_c)) <= 1e-10);
}

TEST_CASE("geometric invariants on random admissible parameters") {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> ua(0.05, 1.95), us(1e-3, 1.0);
    int tested = 0;
    while (tested < 200) {
        const double alpha = ua(rng);
        const double phi_s = us(rng);
        if (alpha * phi_s >= kPi / 2.0 - 1e-3) continue;
        ContourParams p;
        try {
            p = contour_params(alpha, {1.0, phi_s});
        } catch (const std::exception&) {
            continue;  // inadmissible draw
        }
        ++tested;
        CHECK(p.phi_alpha > kPi / 2.0);
        CHECK(p.phi_alpha <= kPi);
        CHECK(p.d > 0.0);
        CHECK(p.aI <= p.a0 * (1 + 1e-14));
        CHECK(p.bI > 0.0);
        CHECK(std::abs(contour_point(p, cplx(0.0, p.d)).real()) <= 1e-12 * p.a0);
        const auto [ad, bd] = shifted_hyperbola(p, p.d);
        CHECK(std::abs(asymptote_angle(ad, bd) - p.phi_alpha) <= 1e-10);
        const auto [am, bm] = shifted_hyperbola(p, -p.d);
        CHECK(std::abs(asymptote_angle(am, bm) - (kPi - p.phi_c)) <= 1e-10);
        for (int k = 1; k < 100; ++k) {
            const double nu = -p.d + 2.0 * p.d * k / 100.0;
            const auto [a, b] = shifted_hyperbola(p, nu);
            CHECK(a > 0.0);
            CHECK(b > 0.0);
        }
        for (double xi : {-30.0, -3.0, -0.5, 0.0, 0.5, 3.0, 30.0}) {
            const cplx z = contour_point(p, xi);
            CHECK(std::abs(std::arg(z)) < p.phi_alpha);
            CHECK(z.real() <= p.a0 - p.aI * std::cosh(xi) + 1e-12);
        }
    }
}

TEST_CASE("to_string lists the parameters") {
    const auto s = to_string(contour_params(1.0, {1.0, 0.1}));
    CHECK(s.find("aI") != std::string::npos);
    CHECK(s.find("phi_alpha") != std::string::npos);
}
