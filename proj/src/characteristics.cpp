#include "zd/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "zd/errors.hpp"
#include "zd/quadrature.hpp"

namespace zd {

double TestFunction::eval(double x) const {
    const double s = (2.0 * x - lo - hi) / (hi - lo);
    if (std::abs(s) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

double TestFunction::deriv(double x) const {
    const double s = (2.0 * x - lo - hi) / (hi - lo);
    if (std::abs(s) >= 1.0) return 0.0;
    const double w = 1.0 - s * s;
    return eval(x) * (-2.0 * s / (w * w)) * (2.0 / (hi - lo));
}

FanSolver::FanSolver(InitialDatum d, double t) : d_(std::move(d)), t_(t) {
    if (!d_.is_c1())
        throw std::invalid_argument("characteristic backend needs a C1 datum; mollify first");
    sup_ = d_.sup_bound();
    if (t_ != 0.0 && !d_.is_zero()) {
        if (d_.get_if<PiecewiseLinear>())
            build_piecewise_linear();
        else
            build_smooth();
    }
    build_components();
}

void FanSolver::build_smooth() {
    const double dbound = d_.deriv_sup_bound();
    if (!std::isfinite(dbound))
        throw std::invalid_argument("characteristic backend needs a bounded derivative");
    const double R = d_.critical_scan_radius(t_);
    const double pitch =
        std::min(d_.feature_scale(), 1.0 / (8.0 * (1.0 + 2.0 * std::abs(t_) * dbound)));
    const long n = std::max(64L, static_cast<long>(std::ceil(2.0 * R / pitch)) + 1);
    const auto g = [&](double y) { return 1.0 + 2.0 * t_ * d_.eval_deriv(y); };
    double yl = -R;
    double gl = g(yl);
    for (long i = 1; i < n; ++i) {
        const double yr = -R + 2.0 * R * static_cast<double>(i) / static_cast<double>(n - 1);
        const double gr = g(yr);
        if ((gl < 0.0) != (gr < 0.0)) {
            double a = yl, b = yr, ga = gl;
            for (int it = 0; it < 80 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
                const double m = 0.5 * (a + b);
                const double gm = g(m);
                if ((ga < 0.0) != (gm < 0.0))
                    b = m;
                else {
                    a = m;
                    ga = gm;
                }
            }
            crit_pts_.push_back(0.5 * (a + b));
        }
        yl = yr;
        gl = gr;
    }
    for (double c : crit_pts_) crit_map_vals_.push_back(map(c));
}

void FanSolver::build_piecewise_linear() {
    const auto& p = *d_.get_if<PiecewiseLinear>();
    // slopes of y + 2t u0(y), with the flat outer pieces prepended/appended
    std::vector<double> slopes{1.0};
    for (std::size_t i = 0; i + 1 < p.breakpoints.size(); ++i)
        slopes.push_back(1.0 + 2.0 * t_ * (p.values[i + 1] - p.values[i]) /
                                   (p.breakpoints[i + 1] - p.breakpoints[i]));
    slopes.push_back(1.0);
    for (std::size_t i = 0; i + 1 < slopes.size(); ++i) {
        const bool flat_l = std::abs(slopes[i]) < 1e-14;
        const bool flat_r = std::abs(slopes[i + 1]) < 1e-14;
        if (flat_l || flat_r || (slopes[i] < 0.0) != (slopes[i + 1] < 0.0))
            crit_pts_.push_back(p.breakpoints[i]);
    }
    for (double c : crit_pts_) crit_map_vals_.push_back(map(c));
}

void FanSolver::build_components() {
    caustics_.t = t_;
    std::vector<double> vals = crit_map_vals_;
    std::sort(vals.begin(), vals.end());
    for (double v : vals) {
        if (caustics_.values.empty() ||
            v - caustics_.values.back() > tol_merge * (1.0 + std::abs(v)))
            caustics_.values.push_back(v);
    }
    const double inf = std::numeric_limits<double>::infinity();
    const auto probe_ell = [&](double x) {
        return solve_once(x).ell();
    };
    if (caustics_.values.empty()) {
        caustics_.components.push_back({-inf, inf, probe_ell(0.0)});
        return;
    }
    for (std::size_t i = 0; i + 1 <= caustics_.values.size(); ++i) {
        const double lo = i == 0 ? -inf : caustics_.values[i - 1];
        const double hi = caustics_.values[i];
        const double probe = i == 0 ? hi - 1.0 : 0.5 * (lo + hi);
        if (hi - lo > 4.0 * tol_caustic)
            caustics_.components.push_back({lo, hi, probe_ell(probe)});
    }
    caustics_.components.push_back(
        {caustics_.values.back(), inf, probe_ell(caustics_.values.back() + 1.0)});
}

CharacteristicFan FanSolver::solve_once(double x) const {
    CharacteristicFan fan;
    fan.t = t_;
    fan.x = x;
    const double margin = 2.0 * std::abs(t_) * sup_ + 1.0;
    std::vector<double> bounds;
    bounds.push_back(std::min(x - margin, crit_pts_.empty() ? x - margin : crit_pts_.front() - 1.0));
    for (double c : crit_pts_) bounds.push_back(c);
    bounds.push_back(std::max(x + margin, crit_pts_.empty() ? x + margin : crit_pts_.back() + 1.0));

    std::vector<double> fvals(bounds.size());
    fvals.front() = map(bounds.front());
    fvals.back() = map(bounds.back());
    for (std::size_t i = 0; i < crit_pts_.size(); ++i) fvals[i + 1] = crit_map_vals_[i];

    for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
        double a = bounds[k], b = bounds[k + 1];
        double fa = fvals[k], fb = fvals[k + 1];
        if (fa == fb) continue;
        if ((fa - x) * (fb - x) > 0.0) continue;
        const int dir = fa < fb ? 1 : -1;
        for (int it = 0; it < 90 && b - a > tol_root * 1e-2 * (1.0 + std::abs(a)); ++it) {
            const double m = 0.5 * (a + b);
            const double fm = map(m);
            if ((fa - x) * (fm - x) <= 0.0) {
                b = m;
            } else {
                a = m;
                fa = fm;
            }
        }
        const double root = 0.5 * (a + b);
        fan.roots.push_back(root);
        fan.deriv_signs.push_back(dir);
    }
    // roots arrive ordered because segments are; merge near-coincident ones
    for (std::size_t i = 0; i + 1 < fan.roots.size();) {
        if (fan.roots[i + 1] - fan.roots[i] < 1e-7 * (1.0 + std::abs(fan.roots[i]))) {
            fan.roots.erase(fan.roots.begin() + static_cast<long>(i),
                            fan.roots.begin() + static_cast<long>(i) + 2);
            fan.deriv_signs.erase(fan.deriv_signs.begin() + static_cast<long>(i),
                                  fan.deriv_signs.begin() + static_cast<long>(i) + 2);
            fan.caustic_flag = true;
        } else {
            ++i;
        }
    }
    for (double r : fan.roots) fan.branch_values.push_back(d_.eval(r));
    return fan;
}

CharacteristicFan FanSolver::solve(double x) const {
    bool near_caustic = false;
    for (double v : crit_map_vals_)
        if (std::abs(x - v) < tol_caustic * (1.0 + std::abs(v))) near_caustic = true;
    double xq = x;
    double shift = 10.0 * tol_caustic * (1.0 + std::abs(x));
    if (near_caustic) xq = x + shift;
    CharacteristicFan fan = solve_once(xq);
    // a degenerate (even-count or merged-root) fan is re-solved from the right
    for (int attempt = 0; attempt < 6 && fan.roots.size() % 2 == 0; ++attempt) {
        near_caustic = true;
        xq += shift;
        shift *= 2.0;
        fan = solve_once(xq);
    }
    fan.x = x;
    fan.caustic_flag = fan.caustic_flag || near_caustic;
    if (fan.roots.empty() || fan.roots.size() % 2 == 0)
        throw CausticHit("characteristic fan remains degenerate near x=" + std::to_string(x));
    return fan;
}

double FanSolver::zd(double x) const {
    const CharacteristicFan fan = solve(x);
    double acc = 0.0;
    for (std::size_t k = 0; k < fan.branch_values.size(); ++k)
        acc += (k % 2 == 0 ? 1.0 : -1.0) * fan.branch_values[k];
    return acc;
}

CausticSet critical_values(const InitialDatum& d, double t) {
    return FanSolver(d, t).caustics();
}

CharacteristicFan solve_fan(const InitialDatum& d, double t, double x) {
    return FanSolver(d, t).solve(x);
}

double zd_pointwise(const InitialDatum& d, double t, double x) {
    return FanSolver(d, t).zd(x);
}

ZDField zd_grid(const InitialDatum& d, double t, const std::vector<double>& grid) {
    const FanSolver solver(d, t);
    ZDField field;
    field.t = t;
    field.grid = grid;
    field.backend = "characteristics";
    field.values.resize(grid.size());
    field.ell.resize(grid.size());
    field.caustic.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const CharacteristicFan fan = solver.solve(grid[i]);
        double acc = 0.0;
        for (std::size_t k = 0; k < fan.branch_values.size(); ++k)
            acc += (k % 2 == 0 ? 1.0 : -1.0) * fan.branch_values[k];
        field.values[i] = acc;
        field.ell[i] = fan.ell();
        field.caustic[i] = fan.caustic_flag ? 1 : 0;
    }
    return field;
}

namespace {

// Panels for integrands supported on preimages of ]phi.lo, phi.hi[ under the
// characteristic map: each preimage is at least (hi-lo)/max|f_t'| wide, so a
// pitch of half that cannot straddle one unseen.
std::vector<double> pairing_breaks(const InitialDatum& d, double t,
                                   const TestFunction& phi, double a, double b) {
    const double steep = 1.0 + 2.0 * std::abs(t) * d.deriv_sup_bound();
    double pitch = 0.5 * (phi.hi - phi.lo) / steep;
    pitch = std::max(pitch, (b - a) / 4096.0);
    std::vector<double> breaks = d.singular_points();
    for (double y = a + pitch; y < b; y += pitch) breaks.push_back(y);
    return breaks;
}

}  // namespace

double weak_pairing(const InitialDatum& d, double t, const TestFunction& phi) {
    const double margin = 2.0 * std::abs(t) * d.sup_bound();
    const double a = phi.lo - margin - 1.0;
    const double b = phi.hi + margin + 1.0;
    const auto f = [&](double y) {
        const double u = d.eval(y);
        if (u == 0.0) return 0.0;
        return phi.eval(y + 2.0 * t * u) * u * (1.0 + 2.0 * t * d.eval_deriv(y));
    };
    return quad::integrate_split(f, a, b, pairing_breaks(d, t, phi, a, b), 1e-9);
}

double pushforward_pairing(const InitialDatum& d, double t, const TestFunction& phi) {
    const double margin = 2.0 * std::abs(t) * d.sup_bound();
    const double a = phi.lo - margin - 1.0;
    const double b = phi.hi + margin + 1.0;
    const auto f = [&](double y) { return phi.eval(y + 2.0 * t * d.eval(y)); };
    return quad::integrate_split(f, a, b, pairing_breaks(d, t, phi, a, b), 1e-9);
}

double field_pairing(const FanSolver& solver, const TestFunction& phi) {
    std::vector<double> splits;
    for (double v : solver.caustics().values)
        if (v > phi.lo && v < phi.hi) splits.push_back(v);
    const auto f = [&](double x) {
        const double p = phi.eval(x);
        return p == 0.0 ? 0.0 : solver.zd(x) * p;
    };
    return quad::integrate_split(f, phi.lo, phi.hi, splits, 1e-9);
}

double burgers_weak_residual(const InitialDatum& d, double t,
                             std::pair<double, double> window, double dt) {
    const TestFunction space = TestFunction::bump(window.first, window.second);
    const TestFunction time = TestFunction::bump(t - dt, t + dt);
    const double h = 1e-3;

    const auto inner = [&](double s) {
        const FanSolver um2(d, s - 2.0 * h), um1(d, s - h), u0(d, s), up1(d, s + h),
            up2(d, s + 2.0 * h);
        std::vector<double> splits;
        for (double v : u0.caustics().values)
            if (v > window.first && v < window.second) splits.push_back(v);
        const auto integrand = [&](double x) {
            const double ut = (um2.zd(x) - 8.0 * um1.zd(x) + 8.0 * up1.zd(x) - up2.zd(x)) /
                              (12.0 * h);
            const double u = u0.zd(x);
            return ut * space.eval(x) - u * u * space.deriv(x);
        };
        return quad::integrate_split(integrand, window.first, window.second, splits, 1e-8);
    };

    // single Kronrod panel in time: the time profile is smooth and the
    // integrand is dominated by the x-resolution anyway
    return quad::detail::gk15([&](double s) { return inner(s) * time.eval(s); }, t - dt,
                              t + dt)
        .integral;
}

}  // namespace zd
