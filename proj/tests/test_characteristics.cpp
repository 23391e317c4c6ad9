#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>

#include "support/oracles.hpp"
#include "zd/characteristics.hpp"
#include "zd/closedforms.hpp"
#include "zd/datum.hpp"
#include "zd/errors.hpp"

using testing_support::lorentzian;
using testing_support::lorentzian_zd_oracle;
using zd::FanSolver;
using zd::InitialDatum;

TEST_CASE("single-branch profile matches the Newton oracle", "[characteristics]") {
    // breaking time of 1/(1+y^2) is ~0.7698, so t = 0.1 has one branch
    const InitialDatum d = lorentzian();
    REQUIRE(zd::zd_pointwise(d, 0.1, 0.0) ==
            Catch::Approx(lorentzian_zd_oracle(1.0, 0.1, 0.0)).margin(1e-11));
    REQUIRE(zd::zd_pointwise(d, 0.1, 0.0) ==
            Catch::Approx(0.96414965481456477).margin(1e-10));
    for (double x : {-2.0, -0.5, 0.4, 1.8}) {
        REQUIRE(zd::zd_pointwise(d, 0.1, x) ==
                Catch::Approx(lorentzian_zd_oracle(1.0, 0.1, x)).margin(1e-11));
    }
}

TEST_CASE("triple-branch fan is ordered and alternates", "[characteristics]") {
    // 3/(1+y^2) breaks at t ~ 0.2566; t = 0.5 has a three-branch window
    const FanSolver solver(lorentzian(3.0), 0.5);
    const zd::CausticSet& ks = solver.caustics();
    REQUIRE(ks.values.size() == 2);
    REQUIRE(ks.components.size() == 3);
    REQUIRE(ks.components[0].ell == 0);
    REQUIRE(ks.components[1].ell == 1);
    REQUIRE(ks.components[2].ell == 0);
    REQUIRE(std::isinf(ks.components[0].lo));
    REQUIRE(ks.components[0].hi == Catch::Approx(ks.values[0]));

    const double x_mid = 0.5 * (ks.values[0] + ks.values[1]);
    const zd::CharacteristicFan fan = solver.solve(x_mid);
    REQUIRE(fan.ell() == 1);
    REQUIRE(fan.roots.size() == 3);
    REQUIRE(fan.roots[0] < fan.roots[1]);
    REQUIRE(fan.roots[1] < fan.roots[2]);
    REQUIRE(fan.deriv_signs[0] == 1);
    REQUIRE(fan.deriv_signs[1] == -1);
    REQUIRE(fan.deriv_signs[2] == 1);
    // every root actually solves y + 2 t u0(y) = x
    for (std::size_t k = 0; k < fan.roots.size(); ++k) {
        const double y = fan.roots[k];
        REQUIRE(y + 2.0 * 0.5 * solver.datum().eval(y) == Catch::Approx(x_mid).margin(1e-9));
        REQUIRE(fan.branch_values[k] == Catch::Approx(solver.datum().eval(y)));
    }
    const double alt = fan.branch_values[0] - fan.branch_values[1] + fan.branch_values[2];
    REQUIRE(solver.zd(x_mid) == Catch::Approx(alt));
}

TEST_CASE("even datum gives the time reflection symmetry", "[characteristics]") {
    const InitialDatum d = lorentzian(3.0);
    for (double x : {-1.3, 0.0, 0.8, 2.4}) {
        REQUIRE(zd::zd_pointwise(d, -0.5, -x) ==
                Catch::Approx(zd::zd_pointwise(d, 0.5, x)).margin(1e-9));
    }
}

TEST_CASE("profile obeys the maximum principle", "[characteristics]") {
    const FanSolver solver(lorentzian(3.0), 0.5);
    for (int i = 0; i <= 200; ++i) {
        const double x = -6.0 + 12.0 * i / 200.0;
        double v;
        try {
            v = solver.zd(x);
        } catch (const zd::CausticHit&) {
            continue;
        }
        REQUIRE(v >= -1e-9);
        REQUIRE(v <= 3.0 + 1e-9);
    }
}

TEST_CASE("grid evaluation labels branch counts", "[characteristics]") {
    const InitialDatum d = lorentzian(3.0);
    std::vector<double> grid;
    for (int i = 0; i <= 120; ++i) grid.push_back(-4.0 + 10.0 * i / 120.0);
    const zd::ZDField field = zd::zd_grid(d, 0.5, grid);
    REQUIRE(field.backend == "characteristics");
    REQUIRE(field.values.size() == grid.size());
    bool saw_multi = false;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        REQUIRE(std::isfinite(field.values[i]));
        if (field.ell[i] == 1) saw_multi = true;
    }
    REQUIRE(saw_multi);
}

TEST_CASE("raw step is rejected, its mollification is accepted", "[characteristics]") {
    REQUIRE_THROWS_AS(FanSolver(InitialDatum::make_step(-1.0, 1.0, 1.0), 0.5),
                      std::invalid_argument);
    const InitialDatum smooth = zd::mollify(InitialDatum::make_step(-1.0, 1.0, 1.0), 0.01);
    REQUIRE(zd::zd_pointwise(smooth, 0.5, 0.0) == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("piecewise linear solver agrees with the exact enumeration", "[characteristics]") {
    const InitialDatum tent =
        InitialDatum::make_piecewise_linear({-1.0, 1.0, 3.0}, {0.0, 1.0, 0.0});
    const zd::PiecewiseLinear pl{{-1.0, 1.0, 3.0}, {0.0, 1.0, 0.0}};
    for (double x : {-0.7, 0.3, 1.5, 2.6, 3.4}) {
        REQUIRE(zd::zd_pointwise(tent, 0.5, x) ==
                Catch::Approx(zd::zd_piecewise_linear(pl, 0.5, x)).margin(1e-10));
    }
    REQUIRE(zd::zd_pointwise(tent, 0.5, 1.5) == Catch::Approx(5.0 / 6.0).margin(1e-10));
}

TEST_CASE("weak pairing equals quadrature of the profile", "[characteristics]") {
    const InitialDatum d = lorentzian(3.0);
    const zd::TestFunction phi = zd::TestFunction::bump(-0.5, 1.5);
    const FanSolver solver(d, 0.5);
    REQUIRE(zd::weak_pairing(d, 0.5, phi) ==
            Catch::Approx(zd::field_pairing(solver, phi)).margin(1e-6));
}

TEST_CASE("pushforward pairing reduces to a line integral", "[characteristics]") {
    // at t = 0.1 the map y -> y + 0.2 u0(y) is monotone, so the pushforward
    // of Lebesgue measure against phi equals int phi(f(y)) dy by substitution
    const InitialDatum d = lorentzian();
    const zd::TestFunction phi = zd::TestFunction::bump(-1.0, 1.0);
    double direct = 0.0;
    const int n = 4000;
    for (int i = 0; i < n; ++i) {
        const double y = -8.0 + 16.0 * (i + 0.5) / n;
        direct += phi.eval(y + 0.2 * d.eval(y)) * (16.0 / n);
    }
    REQUIRE(zd::pushforward_pairing(d, 0.1, phi) == Catch::Approx(direct).margin(1e-4));
}
