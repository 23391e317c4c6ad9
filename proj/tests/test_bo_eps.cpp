#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "zd/bo_eps.hpp"
#include "zd/errors.hpp"

using zd::EpsRunConfig;
using zd::InitialDatum;

namespace {

EpsRunConfig base_config() {
    EpsRunConfig cfg;
    cfg.datum = zd::mollify(InitialDatum::make_step(-1.0, 1.0, 1.0), 0.05);
    cfg.epsilon = 0.2;
    cfg.half_length = 20.0;
    cfg.modes = 1 << 10;
    cfg.t_final = 0.5;
    return cfg;
}

}  // namespace

TEST_CASE("time step divides the horizon exactly", "[eps]") {
    const EpsRunConfig cfg = base_config();
    const double dt = zd::effective_dt(cfg);
    const double dx = 2.0 * cfg.half_length / cfg.modes;
    REQUIRE(dt <= 0.5 * dx / (1.0 + 2.0 * cfg.datum.sup_bound()) * (1.0 + 1e-12));
    const double steps = cfg.t_final / dt;
    REQUIRE(steps == Catch::Approx(std::round(steps)).margin(1e-9));
}

TEST_CASE("config validation rejects bad setups", "[eps]") {
    EpsRunConfig cfg = base_config();
    cfg.modes = 1000;  // not a power of two
    REQUIRE_THROWS_AS(zd::validate_config(cfg), std::invalid_argument);
    cfg = base_config();
    cfg.epsilon = -0.1;
    REQUIRE_THROWS_AS(zd::validate_config(cfg), std::invalid_argument);
    cfg = base_config();
    cfg.half_length = 2.0;  // fronts would wrap around
    REQUIRE_THROWS_AS(zd::validate_config(cfg), std::invalid_argument);
    cfg = base_config();
    cfg.dt = 1.0;  // far beyond the CFL bound
    REQUIRE_THROWS_AS(zd::validate_config(cfg), std::invalid_argument);
    cfg = base_config();
    cfg.datum = InitialDatum::make_rational({{0.0, 1.0}}, {{0.0, -0.5}});
    REQUIRE_THROWS_AS(zd::validate_config(cfg), std::invalid_argument);  // infinite support
    cfg = base_config();
    cfg.epsilon = 1e-4;  // dispersive wavelength below 8 cells
    REQUIRE_THROWS_AS(zd::validate_config(cfg), zd::ResolutionError);
    REQUIRE_NOTHROW(zd::validate_config(base_config()));
}

TEST_CASE("mean is conserved exactly, energy to scheme accuracy", "[eps]") {
    EpsRunConfig cfg = base_config();
    // the CFL step bounds advection, not accuracy: the semi-discrete flow
    // conserves the L2 norm exactly, so the drift is pure RK4 error, O(dt^4)
    cfg.dt = cfg.t_final / 1024.0;
    const zd::EpsSolution sol = zd::run(cfg);
    REQUIRE(sol.conserved.size() >= 2);
    const zd::ConservedSample& first = sol.conserved.front();
    const zd::ConservedSample& last = sol.conserved.back();
    REQUIRE(std::abs(last.mean - first.mean) < 1e-12);
    REQUIRE(std::abs(last.l2 - first.l2) < 1e-6);
}

TEST_CASE("pure dispersion is unitary", "[eps]") {
    EpsRunConfig cfg = base_config();
    cfg.disable_nonlinearity = true;
    const zd::EpsSolution sol = zd::run(cfg);
    REQUIRE(std::abs(sol.conserved.back().l2 - sol.conserved.front().l2) < 1e-12);
}

TEST_CASE("snapshots land on the requested times", "[eps]") {
    EpsRunConfig cfg = base_config();
    cfg.snapshot_times = {0.2};
    const zd::EpsSolution sol = zd::run(cfg);
    REQUIRE(sol.times.front() == 0.0);
    REQUIRE(sol.times.back() == Catch::Approx(0.5));
    bool has_mid = false;
    for (double t : sol.times)
        if (std::abs(t - 0.2) < sol.dt) has_mid = true;
    REQUIRE(has_mid);
    REQUIRE(sol.snapshots.size() == sol.times.size());
    REQUIRE(sol.xgrid.size() == static_cast<std::size_t>(cfg.modes));

    // a zero horizon is the identity evolution: one snapshot, no steps
    cfg = base_config();
    cfg.t_final = 0.0;
    cfg.snapshot_times.clear();
    const zd::EpsSolution idsol = zd::run(cfg);
    REQUIRE(idsol.steps == 0);
    REQUIRE(idsol.times == std::vector<double>{0.0});
    REQUIRE(idsol.snapshots.size() == 1);
}

TEST_CASE("dispersion scaling identity holds discretely", "[eps]") {
    // u^eps(t, x) = eps * w(eps t, x) where w solves the eps = 1 equation
    // with datum u0/eps; with dt_B = eps dt_A both runs take identical steps
    EpsRunConfig a = base_config();
    a.epsilon = 0.25;
    a.modes = 1 << 9;
    a.half_length = 12.0;
    a.t_final = 0.4;
    a.dt = 0.4 / 256.0;
    a.skip_resolution_check = true;

    EpsRunConfig b = a;
    b.epsilon = 1.0;
    b.datum = zd::scaled(a.datum, 1.0 / a.epsilon);
    b.t_final = a.epsilon * a.t_final;
    b.dt = a.epsilon * a.dt;

    const zd::EpsSolution ua = zd::run(a);
    const zd::EpsSolution ub = zd::run(b);
    REQUIRE(ua.steps == ub.steps);
    double worst = 0.0;
    for (std::size_t i = 0; i < ua.snapshots.back().size(); ++i)
        worst = std::max(worst, std::abs(ua.snapshots.back()[i] -
                                         a.epsilon * ub.snapshots.back()[i]));
    REQUIRE(worst < 1e-10);
}

TEST_CASE("weak gap against the dispersionless profile is small", "[eps]") {
    EpsRunConfig cfg = base_config();
    const zd::TestFunction phi = zd::TestFunction::bump(0.5, 1.4);
    const double gap = zd::weak_gap(cfg, phi);
    REQUIRE(gap >= 0.0);
    REQUIRE(gap < 0.5);
    const zd::TestFunction outside = zd::TestFunction::bump(-30.0, -25.0);
    REQUIRE_THROWS_AS(zd::weak_gap(cfg, outside), std::invalid_argument);
}

