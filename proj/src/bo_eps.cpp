#include "zd/bo_eps.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "zd/errors.hpp"
#include "zd/quadrature.hpp"

namespace zd {

namespace {

// FFTW plan creation is not thread-safe; execution with distinct plans is.
std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

struct SpectralRig {
    int n = 0;
    double half_length = 0.0;
    double dx = 0.0;
    std::vector<double> k;       // wavenumbers of the r2c half-spectrum
    std::vector<char> keep;      // dealias mask
    double* real_buf = nullptr;
    fftw_complex* spec_buf = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;

    SpectralRig(int modes, double ll, double dealias) : n(modes), half_length(ll) {
        dx = 2.0 * ll / n;
        const int h = n / 2 + 1;
        k.resize(static_cast<std::size_t>(h));
        keep.resize(static_cast<std::size_t>(h));
        for (int j = 0; j < h; ++j) {
            k[static_cast<std::size_t>(j)] = M_PI * j / ll;
            keep[static_cast<std::size_t>(j)] = j <= dealias * (n / 2) ? 1 : 0;
        }
        real_buf = fftw_alloc_real(static_cast<std::size_t>(n));
        spec_buf = fftw_alloc_complex(static_cast<std::size_t>(h));
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fwd = fftw_plan_dft_r2c_1d(n, real_buf, spec_buf, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_1d(n, spec_buf, real_buf, FFTW_ESTIMATE);
    }
    ~SpectralRig() {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(real_buf);
        fftw_free(spec_buf);
    }
    SpectralRig(const SpectralRig&) = delete;
    SpectralRig& operator=(const SpectralRig&) = delete;

    using Spec = std::vector<std::complex<double>>;

    Spec to_spectral(const std::vector<double>& u) {
        std::memcpy(real_buf, u.data(), sizeof(double) * static_cast<std::size_t>(n));
        fftw_execute(fwd);
        Spec v(k.size());
        for (std::size_t j = 0; j < v.size(); ++j)
            v[j] = {spec_buf[j][0], spec_buf[j][1]};
        return v;
    }
    std::vector<double> to_physical(const Spec& v) {
        for (std::size_t j = 0; j < v.size(); ++j) {
            spec_buf[j][0] = v[j].real() / n;
            spec_buf[j][1] = v[j].imag() / n;
        }
        fftw_execute(bwd);
        return std::vector<double>(real_buf, real_buf + n);
    }
};

}  // namespace

double effective_dt(const EpsRunConfig& cfg) {
    if (cfg.t_final == 0.0) return 0.0;  // zero horizon: no stepping
    const double dx = 2.0 * cfg.half_length / cfg.modes;
    const double cfl = 0.5 * dx / (1.0 + 2.0 * cfg.datum.sup_bound());
    double dt = cfg.dt > 0.0 ? cfg.dt : cfl;
    const double steps = std::ceil(cfg.t_final / dt - 1e-12);
    return cfg.t_final / steps;
}

void validate_config(const EpsRunConfig& cfg) {
    if (!(cfg.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (cfg.modes < 16 || (cfg.modes & (cfg.modes - 1)) != 0)
        throw std::invalid_argument("modes must be a power of two >= 16");
    if (!(cfg.dealias > 0.0 && cfg.dealias <= 1.0))
        throw std::invalid_argument("dealias fraction must lie in (0, 1]");
    if (!(cfg.t_final >= 0.0))
        throw std::invalid_argument("t_final must be nonnegative");
    const double sup = cfg.datum.sup_bound();
    const double radius = cfg.datum.support_radius();
    if (!std::isfinite(radius))
        throw std::invalid_argument(
            "periodic surrogate needs a compactly supported datum");
    const double needed = radius + cfg.t_final * (1.0 + 2.0 * sup) + 2.0;
    if (cfg.half_length < needed)
        throw std::invalid_argument("half_length " + std::to_string(cfg.half_length) +
                                    " below wrap-safe bound " + std::to_string(needed));
    const double dx = 2.0 * cfg.half_length / cfg.modes;
    if (cfg.dt > 0.0) {
        const double cfl = 0.5 * dx / (1.0 + 2.0 * sup);
        if (cfg.dt > cfl * (1.0 + 1e-12))
            throw std::invalid_argument("dt " + std::to_string(cfg.dt) +
                                        " exceeds CFL bound " + std::to_string(cfl));
    }
    if (!cfg.skip_resolution_check) {
        const double wavelength = M_PI * cfg.epsilon / std::max(1.0, sup);
        if (wavelength < 8.0 * dx)
            throw ResolutionError("dispersive wavelength " + std::to_string(wavelength) +
                                  " under-resolved: needs >= 8 cells of " +
                                  std::to_string(dx));
    }
}

EpsSolution run(const EpsRunConfig& cfg) {
    validate_config(cfg);
    const int n = cfg.modes;
    SpectralRig rig(n, cfg.half_length, cfg.dealias);
    const double dt = effective_dt(cfg);
    const int steps =
        dt > 0.0 ? static_cast<int>(std::llround(cfg.t_final / dt)) : 0;

    EpsSolution sol;
    sol.dt = dt;
    sol.steps = steps;
    sol.xgrid.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        sol.xgrid[static_cast<std::size_t>(i)] = -cfg.half_length + i * rig.dx;

    std::vector<double> u0(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        u0[static_cast<std::size_t>(i)] = cfg.datum.eval(sol.xgrid[static_cast<std::size_t>(i)]);

    using Spec = SpectralRig::Spec;
    Spec v = rig.to_spectral(u0);
    const std::size_t h = rig.k.size();
    // keep the state inside the dealias band: the masked quadratic term then
    // conserves the discrete L2 norm exactly (truncated products are alias-free)
    for (std::size_t j = 0; j < h; ++j)
        if (!rig.keep[j]) v[j] = 0.0;

    // exact dispersion phases over a half and a full step: symbol i eps k^2
    Spec e_half(h), e_full(h);
    for (std::size_t j = 0; j < h; ++j) {
        const double phase = cfg.epsilon * rig.k[j] * rig.k[j];
        e_half[j] = std::polar(1.0, phase * dt / 2.0);
        e_full[j] = std::polar(1.0, phase * dt);
    }

    const auto nonlinear = [&](const Spec& w) -> Spec {
        Spec out(h, 0.0);
        if (cfg.disable_nonlinearity) return out;
        const std::vector<double> u = rig.to_physical(w);
        std::vector<double> sq(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) sq[i] = u[i] * u[i];
        Spec hat = rig.to_spectral(sq);
        for (std::size_t j = 0; j < h; ++j) {
            const std::complex<double> dxhat =
                std::complex<double>(0.0, -rig.k[j] * dt) * hat[j];
            out[j] = rig.keep[j] ? dxhat : 0.0;
        }
        return out;
    };

    const auto record = [&](double time, const Spec& w) {
        const std::vector<double> u = rig.to_physical(w);
        double l2 = 0.0, mean = 0.0;
        for (double val : u) {
            l2 += val * val;
            mean += val;
        }
        sol.times.push_back(time);
        sol.snapshots.push_back(u);
        sol.conserved.push_back({time, std::sqrt(l2 * rig.dx), mean * rig.dx});
    };

    // map requested snapshot times to step indices
    std::vector<int> snap_steps;
    if (steps > 0)
        for (double ts : cfg.snapshot_times) {
            int idx = static_cast<int>(std::llround(ts / dt));
            if (idx > 0 && idx < steps) snap_steps.push_back(idx);
        }
    snap_steps.push_back(steps);
    std::sort(snap_steps.begin(), snap_steps.end());
    snap_steps.erase(std::unique(snap_steps.begin(), snap_steps.end()), snap_steps.end());

    record(0.0, v);
    std::size_t next_snap = 0;
    for (int s = 1; s <= steps; ++s) {
        const Spec a = nonlinear(v);
        Spec stage(h);
        for (std::size_t j = 0; j < h; ++j) stage[j] = e_half[j] * (v[j] + 0.5 * a[j]);
        const Spec b = nonlinear(stage);
        for (std::size_t j = 0; j < h; ++j) stage[j] = e_half[j] * v[j] + 0.5 * b[j];
        const Spec c = nonlinear(stage);
        for (std::size_t j = 0; j < h; ++j)
            stage[j] = e_full[j] * v[j] + e_half[j] * c[j];
        const Spec d = nonlinear(stage);
        for (std::size_t j = 0; j < h; ++j)
            v[j] = e_full[j] * v[j] +
                   (e_full[j] * a[j] + 2.0 * e_half[j] * (b[j] + c[j]) + d[j]) / 6.0;
        if (!std::isfinite(v[0].real()) || !std::isfinite(v[h - 1].real()))
            throw std::runtime_error(
                "blow-up at step " + std::to_string(s) + " (t = " +
                std::to_string(s * dt) + "): dt = " + std::to_string(dt) +
                ", dx = " + std::to_string(rig.dx) + ", CFL ratio = " +
                std::to_string(dt / (0.5 * rig.dx / (1.0 + 2.0 * cfg.datum.sup_bound()))));
        if (next_snap < snap_steps.size() && s == snap_steps[next_snap]) {
            record(s * dt, v);
            ++next_snap;
        }
    }
    return sol;
}

double weak_gap(const EpsSolution& sol, const InitialDatum& d, double t,
                const TestFunction& phi) {
    // locate the snapshot at time t
    std::size_t best = 0;
    double dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sol.times.size(); ++i) {
        const double dd = std::abs(sol.times[i] - t);
        if (dd < dist) {
            dist = dd;
            best = i;
        }
    }
    if (dist > 1e-9 * (1.0 + std::abs(t)))
        throw std::invalid_argument("no snapshot recorded at t = " + std::to_string(t));
    const std::vector<double>& u = sol.snapshots[best];
    const double dx = sol.xgrid[1] - sol.xgrid[0];
    double lhs = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double x = sol.xgrid[i];
        if (x > phi.lo && x < phi.hi) lhs += u[i] * phi.eval(x) * dx;
    }
    double rhs = 0.0;
    if (!d.is_zero()) {
        const FanSolver solver(d, t);
        rhs = field_pairing(solver, phi);
    }
    return std::abs(lhs - rhs);
}

double weak_gap(const EpsRunConfig& cfg, const TestFunction& phi) {
    if (phi.lo <= -cfg.half_length || phi.hi >= cfg.half_length)
        throw std::invalid_argument("test function leaves the periodic window");
    const EpsSolution sol = run(cfg);
    return weak_gap(sol, cfg.datum, cfg.t_final, phi);
}

}  // namespace zd
