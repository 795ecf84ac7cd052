#include "gtr/quad.hpp"

#include <cmath>

#include "doctest.h"
#include "gtr/specfun.hpp"

using namespace gtr;
using gtr::specfun::kPi;

TEST_CASE("integrate_finite on smooth integrands") {
    auto r = quad::integrate_finite([](double t) { return std::sin(t); }, 0.0, kPi);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));

    r = quad::integrate_finite([](double) { return 1.0; }, 0.0, 1.0);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-14));

    // frozen 1e7-point composite-rule oracle for int_0^{pi/2} exp(-3/sin^2 t)
    r = quad::integrate_finite(
        [](double t) {
            const double s = std::sin(t);
            return std::exp(-3.0 / (s * s));
        },
        0.0, 0.5 * kPi);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(0.022471621297947200402).epsilon(1e-10));
}

TEST_CASE("integrate_finite reports non-convergence explicitly") {
    quad::QuadSpec spec;
    spec.max_evals = 60;
    spec.rel_tol = 1e-14;
    auto r = quad::integrate_finite(
        [](double t) { return std::cos(200.0 * t * t); }, 0.0, 10.0, spec);
    CHECK_FALSE(r.converged);
}

TEST_CASE("integrate_finite linearity and additivity") {
    auto f = [](double t) { return std::exp(-t) * std::cos(3.0 * t); };
    const double base = quad::integrate_finite(f, 0.0, 2.0).value;
    for (double c : {-1.0, 2.0, 10.0}) {
        auto fc = [&](double t) { return c * f(t); };
        auto r = quad::integrate_finite(fc, 0.0, 2.0);
        CHECK(r.value == doctest::Approx(c * base).epsilon(1e-12));
    }
    auto left = quad::integrate_finite(f, 0.0, 0.7);
    auto right = quad::integrate_finite(f, 0.7, 2.0);
    CHECK(left.value + right.value ==
          doctest::Approx(base).epsilon(1e-11));
}

TEST_CASE("integrate_periodic") {
    auto r = quad::integrate_periodic([](double) { return 3.5; });
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(7.0 * kPi).epsilon(1e-14));

    r = quad::integrate_periodic([](double a) { return std::cos(a); });
    CHECK(r.converged);
    CHECK(std::fabs(r.value) < 1e-12);

    // (1/2pi) int e^{z cos a} da = I0(z), cross-checked against specfun at z = 3
    const double z = 3.0;
    r = quad::integrate_periodic([&](double a) { return std::exp(z * std::cos(a)); });
    CHECK(r.converged);
    const double i0 = specfun::bessel_i0_scaled(z) * std::exp(z);
    CHECK(r.value / (2.0 * kPi) == doctest::Approx(i0).epsilon(1e-12));
}

TEST_CASE("integrate_periodic refinement is stable at convergence") {
    quad::QuadSpec tight;
    tight.rel_tol = 1e-12;
    auto f = [](double a) { return std::exp(2.0 * std::cos(a)) * std::cos(3.0 * a); };
    auto r = quad::integrate_periodic(f, tight);
    CHECK(r.converged);
    CHECK(r.error_estimate <= 1e-12 * std::fabs(r.value) + 1e-12);
}

TEST_CASE("integrate_semi_infinite") {
    auto r = quad::integrate_semi_infinite([](double t) { return std::exp(-t); }, 0.0);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));

    // cross-module identity with Gamma(0,1)
    r = quad::integrate_semi_infinite([](double t) { return std::exp(-t) / t; }, 1.0);
    CHECK(r.converged);
    CHECK(r.value ==
          doctest::Approx(specfun::gamma_upper_zero(1.0)).epsilon(1e-10));

    r = quad::integrate_semi_infinite(
        [](double t) { return t * std::exp(-0.5 * t * t); }, 0.0);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));
}
