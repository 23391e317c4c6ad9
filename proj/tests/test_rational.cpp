#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "support/oracles.hpp"
#include "zd/characteristics.hpp"
#include "zd/errors.hpp"
#include "zd/rational.hpp"

using testing_support::lorentzian_zd_oracle;
using zd::cdouble;
using zd::Rational;

namespace {
Rational lorentzian_r(double a = 1.0) { return {{{0.0, 1.0}}, {{0.0, -0.5 * a}}}; }
}  // namespace

TEST_CASE("characteristic polynomial of the lorentzian", "[rational]") {
    // (y - x)(y^2 + 1) + 2t at t = 0.1, x = 0 is y^3 + y + 0.2
    const zd::CharPoly cp = zd::char_poly(lorentzian_r(), 0.1, 0.0);
    REQUIRE(cp.coeffs.size() == 4);
    REQUIRE(std::abs(cp.coeffs[0] - 0.2) < 1e-15);
    REQUIRE(std::abs(cp.coeffs[1] - 1.0) < 1e-15);
    REQUIRE(std::abs(cp.coeffs[2]) < 1e-15);
    REQUIRE(std::abs(cp.coeffs[3] - 1.0) < 1e-15);
}

TEST_CASE("companion roots are polished to machine precision", "[rational]") {
    // (y-1)(y-2)(y-3) = y^3 - 6y^2 + 11y - 6, ascending coefficients
    const std::vector<cdouble> coeffs{-6.0, 11.0, -6.0, 1.0};
    std::vector<cdouble> roots = zd::poly_roots(coeffs);
    REQUIRE(roots.size() == 3);
    REQUIRE(std::abs(roots[0] - 1.0) < 1e-12);
    REQUIRE(std::abs(roots[1] - 2.0) < 1e-12);
    REQUIRE(std::abs(roots[2] - 3.0) < 1e-12);
}

TEST_CASE("root classification selects N+1 roots", "[rational]") {
    const zd::RootClassification rc = zd::classify_roots(lorentzian_r(), 0.1, 0.0);
    REQUIRE(rc.ell == 0);
    REQUIRE(rc.real_roots.size() == 1);
    REQUIRE(rc.upper_roots.size() == 1);
    REQUIRE(rc.selected.size() == 2);
    REQUIRE(rc.real_roots[0] ==
            Catch::Approx(-0.19282993096291295).margin(1e-12));
}

TEST_CASE("root-sum and collocation routes agree", "[rational]") {
    const Rational d = lorentzian_r(3.0);
    for (double x : {-1.7, 0.3, 2.2, 4.9}) {
        const cdouble direct = zd::lambda_direct(d, 2.0, x);
        const zd::LambdaSystem sys = zd::lambda_system(d, 2.0, x);
        REQUIRE(std::abs(direct - sys.lambda) < 1e-8);
        REQUIRE(sys.residual < 1e-9 * (1.0 + std::abs(x)));
        REQUIRE(sys.mu.size() == 1);
    }
}

TEST_CASE("profile value matches the oracle and the fan route", "[rational]") {
    REQUIRE(zd::zd_rational(lorentzian_r(), 0.1, 0.0) ==
            Catch::Approx(0.96414965481456477).margin(1e-10));
    REQUIRE(zd::zd_rational(lorentzian_r(), 0.0, 0.7) == Catch::Approx(1.0 / 1.49));
    const Rational d3 = lorentzian_r(3.0);
    const zd::InitialDatum datum3 = testing_support::lorentzian(3.0);
    for (double t : {0.1, 0.8, 2.0}) {
        for (double x : {-2.3, 0.45, 1.3, 3.8}) {
            REQUIRE(zd::zd_rational(d3, t, x) ==
                    Catch::Approx(zd::zd_pointwise(datum3, t, x)).margin(1e-8));
        }
    }
}

TEST_CASE("negative times mirror positive ones for even data", "[rational]") {
    const Rational d = lorentzian_r(3.0);
    REQUIRE(zd::zd_rational(d, -0.9, -1.4) ==
            Catch::Approx(zd::zd_rational(d, 0.9, 1.4)).margin(1e-10));
}

TEST_CASE("exact double root on the caustic", "[rational]") {
    // at t = 1, x = 2 the polynomial is y(y-1)^2: the fold point itself
    const Rational d = lorentzian_r();
    REQUIRE_THROWS_AS(zd::classify_roots(d, 1.0, 2.0), zd::CausticHit);
    // values just off the fold approach u0(0) = 1 with a sqrt kink
    const double left = zd::zd_rational(d, 1.0, 2.0 - 1e-4);
    const double right = zd::zd_rational(d, 1.0, 2.0 + 1e-4);
    REQUIRE(left == Catch::Approx(1.0).margin(0.05));
    REQUIRE(right == Catch::Approx(1.0).margin(0.05));
    REQUIRE(std::abs(left - right) < 0.05);
}

TEST_CASE("grid evaluation retries across the caustic", "[rational]") {
    const Rational d = lorentzian_r();
    std::vector<double> grid;
    for (int i = 0; i <= 40; ++i) grid.push_back(1.9 + 0.2 * i / 40.0);  // hits 2.0
    const zd::ZDField field = zd::zd_grid_rational(d, 1.0, grid);
    REQUIRE(field.backend == "rational");
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        REQUIRE(std::isfinite(field.values[i]));
        // sqrt-kink at the fold: steps scale like sqrt of the 0.005 pitch
        if (i > 0) REQUIRE(std::abs(field.values[i] - field.values[i - 1]) < 0.15);
    }
}

TEST_CASE("bordered determinant ratio collapses to a root sum", "[rational]") {
    const std::vector<cdouble> z{{1.0, 0.0}, {2.0, 0.0}, {4.0, 0.0}};
    const std::vector<cdouble> p{{0.5, 0.5}, {3.0, 0.0}};
    const cdouble got = zd::cauchy_vandermonde_ratio(z, p);
    REQUIRE(std::abs(got - cdouble(3.5, -0.5)) < 1e-12);
}

TEST_CASE("repeated poles are split into simple ones", "[rational]") {
    const Rational twin{{{0.0, 1.0}, {0.0, 1.0}}, {{0.0, -0.3}, {0.0, -0.2}}};
    const Rational simple = zd::split_poles(twin, 1e-6);
    REQUIRE(simple.poles.size() == 2);
    REQUIRE(std::abs(simple.poles[0] - simple.poles[1]) > 1e-7);
    REQUIRE(simple.poles[0].imag() > 0.0);
    REQUIRE(simple.poles[1].imag() > 0.0);
}

TEST_CASE("two-pole datum round trips through both routes", "[rational]") {
    // u0 with poles i and 1 + i/2 stays smooth at small |t|
    const Rational d{{{0.0, 1.0}, {1.0, 0.5}}, {{0.1, -0.4}, {-0.2, -0.3}}};
    const zd::InitialDatum datum = zd::InitialDatum::make_rational(d.poles, d.residues);
    for (double x : {-1.1, 0.2, 1.4}) {
        REQUIRE(zd::zd_rational(d, 0.05, x) ==
                Catch::Approx(zd::zd_pointwise(datum, 0.05, x)).margin(1e-8));
        const zd::LambdaSystem sys = zd::lambda_system(d, 0.05, x);
        REQUIRE(std::abs(sys.lambda - zd::lambda_direct(d, 0.05, x)) < 1e-8);
    }
}
