#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>

#include "zd/closedforms.hpp"
#include "zd/errors.hpp"
#include "zd/quadrature.hpp"

using zd::zd_piecewise_linear;
using zd::zd_step;

TEST_CASE("step profile before the ramps merge", "[closedforms]") {
    // rising ramp, plateau, falling ramp at t = 1/4
    REQUIRE(zd_step(0.25, -2.0) == 0.0);
    REQUIRE(zd_step(0.25, -0.75) == Catch::Approx(0.5));
    REQUIRE(zd_step(0.25, 0.0) == 1.0);
    REQUIRE(zd_step(0.25, 1.25) == Catch::Approx(0.5));
    REQUIRE(zd_step(0.25, 1.6) == 0.0);
}

TEST_CASE("step profile at the merge time is the tent", "[closedforms]") {
    const zd::PiecewiseLinear tent = zd::step_tent_profile();
    REQUIRE(tent.breakpoints == std::vector<double>{-1.0, 1.0, 3.0});
    for (double x : {-0.9, -0.2, 0.5, 1.0, 1.9, 2.8}) {
        const double lin =
            x <= 1.0 ? 0.5 * (x + 1.0) : 1.0 - 0.5 * (x - 1.0);
        REQUIRE(zd_step(1.0, x) == Catch::Approx(lin));
    }
}

TEST_CASE("step profile develops the 1/t plateau after merging", "[closedforms]") {
    REQUIRE(zd_step(2.0, 2.0) == Catch::Approx(0.5));
    REQUIRE(zd_step(2.0, 0.0) == Catch::Approx(0.25));
    REQUIRE(zd_step(2.0, 4.0) == Catch::Approx(0.25));
    REQUIRE(zd_step(2.0, 5.0) == 0.0);
    // continuity at the junctions
    for (double t : {0.4, 1.0, 1.7, 3.0}) {
        for (double x : {-1.0, 2.0 * t - 1.0, 1.0, 2.0 * t + 1.0}) {
            const double jump = std::abs(zd_step(t, x + 1e-9) - zd_step(t, x - 1e-9));
            REQUIRE(jump < 1e-7);
        }
    }
}

TEST_CASE("step profile conserves mass and range", "[closedforms]") {
    for (double t : {0.3, 0.5, 1.0, 2.0, 4.0}) {
        const double mass = zd::quad::integrate_split(
            [&](double x) { return zd_step(t, x); }, -2.0, 2.0 * t + 2.0,
            {-1.0, 2.0 * t - 1.0, 1.0, 2.0 * t + 1.0}, 1e-12);
        REQUIRE(mass == Catch::Approx(2.0).margin(1e-10));
    }
}

TEST_CASE("step profile has the time reflection symmetry", "[closedforms]") {
    for (double x : {-1.5, -0.3, 0.6, 2.2}) {
        REQUIRE(zd_step(-0.7, -x) == Catch::Approx(zd_step(0.7, x)));
    }
}

TEST_CASE("piecewise linear enumeration handles folds and flats", "[closedforms]") {
    const zd::PiecewiseLinear tent{{-1.0, 1.0, 3.0}, {0.0, 1.0, 0.0}};
    REQUIRE(zd_piecewise_linear(tent, 0.5, 1.5) == Catch::Approx(5.0 / 6.0));
    REQUIRE(zd_piecewise_linear(tent, 0.5, -2.0) == 0.0);
    // at t = 1 the falling piece maps entirely to x = 3
    REQUIRE_THROWS_AS(zd_piecewise_linear(tent, 1.0, 3.0), zd::CausticHit);
    // just left of the flat image only the rising piece contributes
    REQUIRE(zd_piecewise_linear(tent, 1.0, 2.9) == Catch::Approx(0.975));
    REQUIRE(zd_piecewise_linear(tent, 1.0, 3.1) == 0.0);
}

TEST_CASE("semigroup gap witnesses the non-semigroup property", "[closedforms]") {
    const zd::SemigroupGap g = zd::semigroup_gap(0.5);
    REQUIRE(g.x_witness == Catch::Approx(1.5));
    REQUIRE(g.gap == Catch::Approx(1.0 / 6.0).margin(1e-12));
    // restart-vs-one-shot mismatch s/(2(1+s)) decays linearly in s
    double prev = 1.0;
    for (int k = 1; k <= 6; ++k) {
        const double s = std::ldexp(1.0, -k);
        const zd::SemigroupGap gk = zd::semigroup_gap(s);
        REQUIRE(gk.gap == Catch::Approx(s / (2.0 * (1.0 + s))).margin(1e-12));
        REQUIRE(gk.gap < prev);
        prev = gk.gap;
    }
    REQUIRE_THROWS_AS(zd::semigroup_gap(0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(zd::semigroup_gap(1.5), std::invalid_argument);
}
