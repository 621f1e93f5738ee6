#include "pidstab/quadrature.hpp"

#include <cmath>

#include "doctest.h"
#include "pidstab/errors.hpp"

using namespace pidstab;

TEST_CASE("gauss-legendre rule on [0,1] is normalized and symmetric") {
    const QuadratureRule& r = gauss_legendre_01(16);
    REQUIRE(r.nodes.size() == 16);
    double wsum = 0.0;
    for (double w : r.weights) wsum += w;
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
    for (std::size_t i = 0; i < 16; ++i)
        CHECK(r.nodes[i] == doctest::Approx(1.0 - r.nodes[15 - i]).epsilon(1e-13));
}

TEST_CASE("polynomials integrate exactly") {
    const double v = integrate_scalar_01([](double x) { return x * x * x; });
    CHECK(v == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("smooth transcendental integrands") {
    CHECK(integrate_scalar_01([](double x) { return std::sin(M_PI * x); }) ==
          doctest::Approx(2.0 / M_PI).epsilon(1e-12));
    const Vector v = integrate_01([](double t) { return Vector{t, std::exp(t)}; });
    CHECK(v[0] == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(v[1] == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
}

TEST_CASE("adaptive halving resolves a narrow peak") {
    // 1/(1 + 100(x-0.3)^2) has antiderivative atan(10(x-0.3))/10.
    const double expected = (std::atan(7.0) + std::atan(3.0)) / 10.0;
    const double v =
        integrate_scalar_01([](double x) { return 1.0 / (1.0 + 100.0 * (x - 0.3) * (x - 0.3)); });
    CHECK(v == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("depth exhaustion raises") {
    // A step discontinuity never converges under bisection.
    CHECK_THROWS_AS(
        integrate_scalar_01([](double x) { return x < 1.0 / 3.0 ? 0.0 : 1.0; }, 16, 1e-14, 0.0, 4),
        NumericError);
    CHECK_THROWS_AS(gauss_legendre_01(0), DomainError);
}
