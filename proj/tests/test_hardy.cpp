#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "support/oracles.hpp"
#include "zd/hardy.hpp"

using testing_support::lorentzian;
using zd::cdouble;

namespace {
const double pi = std::acos(-1.0);
}

TEST_CASE("frequency window fits the pole decay", "[hardy]") {
    // tail of |pi e^-xi| drops below 1e-8 at xi = ln(pi 1e8) ~ 19.57
    const std::vector<double> grid = zd::hardy_grid(lorentzian(), 512);
    REQUIRE(grid.size() == 512);
    REQUIRE(grid.front() == 0.0);
    REQUIRE(grid.back() == Catch::Approx(std::log(pi * 1e8)).epsilon(1e-12));
    const double dx = grid[1] - grid[0];
    for (std::size_t k = 1; k + 1 < grid.size(); ++k)
        REQUIRE(grid[k + 1] - grid[k] == Catch::Approx(dx).margin(1e-12));
}

TEST_CASE("half-line transform of the lorentzian is pi e^-xi", "[hardy]") {
    const std::vector<double> grid = zd::hardy_grid(lorentzian(), 512);
    const zd::HalfLineSpectrum f = zd::fourier_plus(lorentzian(), grid);
    for (std::size_t k = 0; k < grid.size(); k += 37) {
        REQUIRE(std::abs(f.values[k] - pi * std::exp(-grid[k])) < 1e-12);
    }
    REQUIRE(std::abs(f.zero_limit - pi) < 1e-10);
    // Plancherel: ||f_hat||_{L2(0,inf)} = pi/sqrt(2), trapezoid-limited here
    REQUIRE(zd::spectrum_l2(f) == Catch::Approx(pi / std::sqrt(2.0)).margin(2e-3));
}

TEST_CASE("resolvent sweep matches the exponential closed form", "[hardy]") {
    const std::vector<double> grid = zd::hardy_grid(lorentzian(), 2048);
    const double big_xi = grid.back();
    zd::HalfLineSpectrum f;
    f.xi_grid = grid;
    f.values.resize(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) f.values[k] = std::exp(-grid[k]);
    const zd::HalfLineSpectrum g = zd::g_resolvent(f, cdouble(0.0, 1.0));
    for (std::size_t k = 0; k < grid.size(); k += 101) {
        const cdouble exact = cdouble(0.0, 0.5) * (std::exp(-grid[k]) -
                                                   std::exp(grid[k] - 2.0 * big_xi));
        REQUIRE(std::abs(g.values[k] - exact) < 1e-7);
    }
    REQUIRE(std::abs(g.zero_limit - cdouble(0.0, 0.5)) < 1e-7);
}

TEST_CASE("toeplitz action on a rational symbol", "[hardy]") {
    // symbol 1/(y-2i) acting on 1/(y+i) gives (i/3)/(y+i); on the transform
    // side (2 pi / 3) e^-xi up to the e^{2 xi - 3 Xi} truncation correction
    const std::vector<double> grid = zd::hardy_grid(lorentzian(), 1024);
    const zd::SpectralSymbol b_hat = [](double xi, int side) -> cdouble {
        if (xi < 0.0 || (xi == 0.0 && side < 0))
            return cdouble(0.0, 2.0 * pi) * std::exp(2.0 * xi);
        return 0.0;
    };
    zd::HalfLineSpectrum f;
    f.xi_grid = grid;
    f.values.resize(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k)
        f.values[k] = cdouble(0.0, -2.0 * pi) * std::exp(-grid[k]);
    const zd::HalfLineSpectrum out = zd::toeplitz_apply_symbol(b_hat, f);
    for (std::size_t k = 0; k < grid.size(); k += 73) {
        const double xi = grid[k];
        const cdouble exact = (2.0 * pi / 3.0) *
                              (std::exp(-xi) - std::exp(2.0 * xi - 3.0 * grid.back()));
        REQUIRE(std::abs(out.values[k] - exact) < 1e-5);
    }
}

TEST_CASE("hardy extension of the lorentzian at t = 0", "[hardy]") {
    // Pi u0 = (i/2)/(y + i), so its value at y = i is exactly 1/4
    const cdouble got = zd::pi_u(lorentzian(), 0.0, cdouble(0.0, 1.0), 512);
    REQUIRE(std::abs(got - cdouble(0.25, 0.0)) < 1e-5);
}

TEST_CASE("boundary trace at t = 0 is the Poisson extension", "[hardy]") {
    const std::vector<double> xs{-1.0, 0.0, 0.5, 1.0};
    const zd::ZDField tr = zd::boundary_trace(lorentzian(), 0.0, xs, 0.5, 512);
    REQUIRE(tr.backend == "hardy");
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double exact = 1.5 / (xs[i] * xs[i] + 2.25);
        REQUIRE(tr.values[i] == Catch::Approx(exact).margin(1e-5));
    }
}

TEST_CASE("dense and fixed-point solves agree off the real line", "[hardy]") {
    zd::ResolventProblem rp;
    rp.datum = lorentzian();
    rp.t = 0.3;
    rp.x = cdouble(0.4, 1.2);  // contraction: Im x > 2|t| sup|u0|
    rp.xi_grid = zd::hardy_grid(rp.datum, 256);
    zd::SolveInfo dense_info, fp_info;
    const zd::HalfLineSpectrum dense = zd::solve_resolvent(rp, &dense_info);
    const zd::HalfLineSpectrum fixed = zd::solve_resolvent_neumann(rp, 400, &fp_info);
    REQUIRE(dense_info.rcond > 1e-6);
    REQUIRE(dense_info.residual < 1e-12);
    REQUIRE(fp_info.neumann_iters > 1);
    double sup = 0.0;
    for (std::size_t k = 0; k < dense.values.size(); ++k)
        sup = std::max(sup, std::abs(dense.values[k] - fixed.values[k]));
    REQUIRE(sup < 1e-8);
    REQUIRE(std::abs(dense.zero_limit - fixed.zero_limit) < 1e-8);
}

TEST_CASE("queries too close to the real line are rejected", "[hardy]") {
    zd::ResolventProblem rp;
    rp.datum = lorentzian();
    rp.t = 0.3;
    rp.x = cdouble(0.0, 1e-4);
    rp.xi_grid = zd::hardy_grid(rp.datum, 256);
    REQUIRE_THROWS_AS(zd::solve_resolvent(rp), std::invalid_argument);
    REQUIRE_THROWS_AS(zd::boundary_trace(lorentzian(), 0.0, {0.0}, 1e-4, 256),
                      std::invalid_argument);
}

TEST_CASE("zero datum has a vanishing extension", "[hardy]") {
    const cdouble got = zd::pi_u(zd::InitialDatum::zero(), 0.5, cdouble(0.0, 1.0), 256);
    REQUIRE(std::abs(got) == 0.0);
}
