#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "zd/quadrature.hpp"

TEST_CASE("smooth closed forms are reproduced", "[quadrature]") {
    const double pi = std::acos(-1.0);
    REQUIRE(zd::quad::integrate([](double x) { return std::sin(x); }, 0.0, pi) ==
            Catch::Approx(2.0).epsilon(1e-12));
    REQUIRE(zd::quad::integrate([](double y) { return std::exp(-y * y); }, -10.0, 10.0) ==
            Catch::Approx(std::sqrt(pi)).epsilon(1e-12));
}

TEST_CASE("narrow peaks trigger adaptive refinement", "[quadrature]") {
    const double exact = (std::atan(50.0 * 0.7) + std::atan(50.0 * 1.3)) / 50.0;
    const double got = zd::quad::integrate(
        [](double x) {
            const double s = 50.0 * (x - 0.3);
            return 1.0 / (1.0 + s * s);
        },
        -1.0, 1.0, 1e-12);
    REQUIRE(got == Catch::Approx(exact).epsilon(1e-10));
}

TEST_CASE("interior break points isolate kinks", "[quadrature]") {
    const double got =
        zd::quad::integrate_split([](double x) { return std::abs(x); }, -1.0, 2.0, {0.0});
    REQUIRE(got == Catch::Approx(2.5).epsilon(1e-13));
}

TEST_CASE("reversed limits flip the sign", "[quadrature]") {
    REQUIRE(zd::quad::integrate([](double) { return 1.0; }, 2.0, -1.0) ==
            Catch::Approx(-3.0));
    REQUIRE(zd::quad::integrate([](double) { return 7.0; }, 1.0, 1.0) == 0.0);
}
