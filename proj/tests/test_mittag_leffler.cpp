#include <doctest.h>

#include <cmath>

#include "fcp/error.hpp"
#include "fcp/mittag_leffler.hpp"
#include "fcp/types.hpp"

using namespace fcp;

TEST_CASE("gamma") {
    CHECK(gamma_real(1.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(gamma_real(2.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(gamma_real(0.5) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-13));
    CHECK(std::abs(gamma_real(1.5) - 0.8862269255) <= 1e-9);
    CHECK(gamma_real(5.0) == doctest::Approx(24.0).epsilon(1e-13));
    CHECK_THROWS_AS(gamma_real(0.0), UsageError);
    CHECK_THROWS_AS(gamma_real(-1.5), UsageError);
}

TEST_CASE("series identities") {
    for (double a : {0.3, 1.0, 1.7})
        for (double b : {1.0, 1.5, 2.0}) CHECK(ml_series(a, b, 0.0) == doctest::Approx(1.0 / std::tgamma(b)));
    CHECK(std::abs(ml_series(1.0, 1.0, -1.0) - 0.3678794412) <= 1e-10);
    CHECK(std::abs(ml_series(2.0, 1.0, -1.0) - std::cos(1.0)) <= 1e-10);
    CHECK(std::abs(ml_series(1.0, 2.0, -0.7) - (1.0 - std::exp(-0.7)) / 0.7) <= 1e-14);
    CHECK_THROWS_AS(ml_series(0.5, 1.0, -50.0), NumericalError);
    CHECK_THROWS_AS(ml_series(0.5, 1.0, 1.0), UsageError);
}

TEST_CASE("contour values") {
    CHECK(std::abs(ml_contour(1.0, 1.0, 1.0) - std::exp(-1.0)) <= 1e-9);
    CHECK(std::abs(ml_contour(0.5, 1.0, 1.0) - std::exp(1.0) * std::erfc(1.0)) <= 1e-8);
    CHECK(std::abs(ml_contour(0.5, 1.0, 1.0) - 0.4275835762) <= 1e-8);
    CHECK(std::abs(ml_contour(1.5, 2.0, 1.0) - ml_series(1.5, 2.0, -1.0, 1e-12)) <= 1e-9);
    // Far field where the series is unusable: E_{1/2}(-x) = e^{x^2} erfc(x).
    for (double x : {5.0, 10.0, 20.0}) {
        const double ref = std::exp(x * x) * std::erfc(x);  // accurate to ~1e-13 rel for these x
        CHECK(std::abs(ml_contour(0.5, 1.0, x) - ref) <= 1e-9);
    }
    CHECK(std::abs(ml_contour(1.0, 1.0, 30.0) - std::exp(-30.0)) <= 1e-12);
    CHECK_THROWS_AS(ml_contour(1.0, 1.0, 0.0), UsageError);
}

TEST_CASE("series and contour agree on the overlap") {
    for (double a : {0.3, 0.7, 1.0, 1.4, 1.9})
        for (double b : {1.0, 2.0})
            for (int i = 0; i < 25; ++i) {
                const double z = -2.0 + 1.5 * i / 24.0;
                CAPTURE(a);
                CAPTURE(b);
                CAPTURE(z);
                CHECK(std::abs(ml_series(a, b, z) - ml_contour(a, b, -z)) <= 1e-8);
            }
}

TEST_CASE("recurrence and dispatcher") {
    for (double a : {0.3, 0.7, 1.0, 1.4, 1.9})
        for (double b : {1.0, 2.0})
            for (int i = 0; i < 25; ++i) {
                const double z = -2.0 + 1.5 * i / 24.0;
                CHECK(std::abs(ml(a, b, z) - (z * ml(a, a + b, z) + 1.0 / std::tgamma(b))) <= 1e-8);
            }
    CHECK(std::abs(ml(1.0, 1.0, -7.0) - std::exp(-7.0)) <= 1e-12);
    CHECK(std::abs(ml(1.0, 1.0, -1.0) - std::exp(-1.0)) <= 1e-14);
    CHECK(ml(0.5, 1.0, 0.0) == 1.0);
    CHECK_THROWS_AS(ml(0.5, 1.0, 0.1), UsageError);
    CHECK_THROWS_AS(ml(2.0, 1.0, -1.0), UsageError);
}

TEST_CASE("complete monotonicity for alpha <= 1") {
    for (double a : {0.2, 0.5, 0.8, 1.0}) {
        double prev = 2.0;
        for (int k = 0; k < 100; ++k) {
            const double t = 5.0 * k / 99.0;
            const double v = ml(a, 1.0, -kPi * kPi * std::pow(t, a));
            CHECK(v <= prev + 1e-12);
            prev = v;
        }
    }
}
