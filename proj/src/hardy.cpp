#include "zd/hardy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "zd/errors.hpp"
#include "zd/parallel.hpp"
#include "zd/quadrature.hpp"

namespace zd {

namespace {

constexpr double two_pi = 2.0 * M_PI;

void require_uniform(const std::vector<double>& grid) {
    if (grid.size() < 8) throw std::invalid_argument("spectral grid too small");
    const double dx = grid[1] - grid[0];
    for (std::size_t k = 1; k + 1 < grid.size(); ++k)
        if (std::abs(grid[k + 1] - grid[k] - dx) > 1e-12 * (1.0 + dx))
            throw std::invalid_argument("spectral grid must be uniform");
}

// int_0^dx s^m e^{ixs} ds for m = 0..3: upward recurrence, series fallback
// when |x dx| is small enough that the recurrence loses digits.
std::array<cdouble, 4> exp_moments(cdouble x, double dx) {
    const cdouble w = cdouble(0.0, 1.0) * x;
    std::array<cdouble, 4> mom;
    if (std::abs(w) * dx < 0.5) {
        for (int m = 0; m < 4; ++m) {
            cdouble term = 1.0 / double(m + 1);
            cdouble acc = term;
            cdouble pw = 1.0;
            double fact = 1.0;
            for (int n = 1; n < 26; ++n) {
                pw *= w * dx;
                fact *= n;
                term = pw / (fact * double(m + n + 1));
                acc += term;
            }
            mom[m] = std::pow(dx, m + 1) * acc;
        }
        return mom;
    }
    const cdouble e = std::exp(w * dx);
    mom[0] = (e - 1.0) / w;
    double dpow = 1.0;
    for (int m = 1; m < 4; ++m) {
        dpow *= dx;
        mom[m] = (dpow * e - double(m) * mom[m - 1]) / w;
    }
    return mom;
}

// 4th-order finite-difference slopes on a uniform grid.
std::vector<cdouble> fd_slopes(const std::vector<cdouble>& f, double dx) {
    const std::size_t n = f.size();
    std::vector<cdouble> d(n);
    const double s = 1.0 / (12.0 * dx);
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * s;
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * s;
    for (std::size_t k = 2; k + 2 < n; ++k)
        d[k] = (f[k - 2] - 8.0 * f[k - 1] + 8.0 * f[k + 1] - f[k + 2]) * s;
    d[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] -
                f[n - 5]) * s;
    d[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] +
                3.0 * f[n - 5]) * s;
    return d;
}

// Backward sweep computing i * int_xi_k^Xi f_hat(eta) e^{ix(eta - xi_k)} deta
// for every node k, writing over `vals`. Each cell contributes the exact
// integral of its cubic Hermite interpolant against the oscillatory weight.
void g_resolvent_inplace(std::vector<cdouble>& vals, cdouble x, double dx) {
    const std::size_t n = vals.size();
    const std::vector<cdouble> slope = fd_slopes(vals, dx);
    const std::array<cdouble, 4> mom = exp_moments(x, dx);
    const cdouble shift = std::exp(cdouble(0.0, 1.0) * x * dx);
    const double inv_dx = 1.0 / dx;
    cdouble tail = 0.0;
    cdouble next_val = vals[n - 1];
    vals[n - 1] = 0.0;
    for (std::size_t k = n - 1; k-- > 0;) {
        const cdouble f0 = vals[k], f1 = next_val;
        const cdouble d0 = slope[k], d1 = slope[k + 1];
        const cdouble a0 = f0;
        const cdouble a1 = d0;
        const cdouble a2 = (3.0 * (f1 - f0) * inv_dx - (2.0 * d0 + d1)) * inv_dx;
        const cdouble a3 = (2.0 * (f0 - f1) * inv_dx + (d0 + d1)) * inv_dx * inv_dx;
        const cdouble cell = a0 * mom[0] + a1 * mom[1] + a2 * mom[2] + a3 * mom[3];
        tail = cell + shift * tail;
        next_val = vals[k];
        vals[k] = cdouble(0.0, 1.0) * tail;
    }
}

// n+1 weights (unit spacing) integrating [0, n] to 4th order: endpoint-
// corrected trapezoid for long ranges, exact Newton-Cotes for short ones.
std::vector<double> endpoint_weights(int n) {
    switch (n) {
        case 0: return {0.0};
        case 1: return {0.5, 0.5};
        case 2: return {1.0 / 3, 4.0 / 3, 1.0 / 3};
        case 3: return {3.0 / 8, 9.0 / 8, 9.0 / 8, 3.0 / 8};
        case 4: return {14.0 / 45, 64.0 / 45, 24.0 / 45, 64.0 / 45, 14.0 / 45};
        case 5:
            return {95.0 / 288, 375.0 / 288, 250.0 / 288,
                    250.0 / 288, 375.0 / 288, 95.0 / 288};
        default: {
            std::vector<double> w(static_cast<std::size_t>(n) + 1, 1.0);
            w[0] = w[n] = 3.0 / 8;
            w[1] = w[n - 1] = 7.0 / 6;
            w[2] = w[n - 2] = 23.0 / 24;
            return w;
        }
    }
}

cdouble rational_hat(const Rational& r, double xi) {
    // residues picked up in the lower half-plane for xi > 0
    cdouble acc = 0.0;
    for (std::size_t j = 0; j < r.poles.size(); ++j)
        acc += std::conj(r.residues[j]) *
               std::exp(cdouble(0.0, -xi) * std::conj(r.poles[j]));
    return cdouble(0.0, -two_pi) * acc;
}

cdouble oscillatory_hat(const InitialDatum& d, double xi) {
    const double r = d.support_radius();
    std::vector<double> breaks = d.singular_points();
    const auto re = [&](double y) { return d.eval(y) * std::cos(xi * y); };
    const auto im = [&](double y) { return -d.eval(y) * std::sin(xi * y); };
    return {quad::integrate_split(re, -r, r, breaks, 1e-10),
            quad::integrate_split(im, -r, r, breaks, 1e-10)};
}

cdouble u0_hat(const InitialDatum& d, double xi) {
    if (d.is_zero()) return 0.0;
    if (const Rational* r = d.get_if<Rational>()) return rational_hat(*r, xi);
    return oscillatory_hat(d, xi);
}

cdouble quadratic_to_zero(const std::vector<double>& xi, const std::vector<cdouble>& v) {
    // Lagrange parabola through the three smallest nodes, evaluated at 0
    cdouble acc = 0.0;
    for (int a = 0; a < 3; ++a) {
        double w = 1.0;
        for (int b = 0; b < 3; ++b)
            if (b != a) w *= (0.0 - xi[b]) / (xi[a] - xi[b]);
        acc += w * v[a];
    }
    return acc;
}

void require_height(cdouble x) {
    if (!(x.imag() >= hardy_sigma_min))
        throw std::invalid_argument("Im x must be >= " + std::to_string(hardy_sigma_min));
}

}  // namespace

double spectrum_l2(const HalfLineSpectrum& f) {
    if (f.values.size() < 2) return 0.0;
    const double dx = f.xi_grid[1] - f.xi_grid[0];
    double acc = 0.0;
    for (std::size_t k = 0; k < f.values.size(); ++k) {
        const double s = std::norm(f.values[k]);
        acc += (k == 0 || k + 1 == f.values.size()) ? 0.5 * s : s;
    }
    return std::sqrt(acc * dx);
}

std::vector<double> hardy_grid(const InitialDatum& d, int m, double tail_tol) {
    if (m < 8) throw std::invalid_argument("hardy_grid: need at least 8 points");
    double xi_max = 16.0;
    if (d.is_zero()) {
        // nothing to resolve
    } else if (const Rational* r = d.get_if<Rational>()) {
        double strength = 0.0;
        double decay = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < r->poles.size(); ++j) {
            strength += std::abs(r->residues[j]);
            decay = std::min(decay, r->poles[j].imag());
        }
        if (strength > 0.0)
            xi_max = std::max(xi_max, std::log(two_pi * strength / (decay * tail_tol)) / decay);
    } else {
        // fit |u0_hat| ~ C xi^{-k} over the top octave; accept once the
        // implied tail integral drops below tolerance
        bool ok = false;
        for (double trial : {16.0, 32.0, 64.0, 128.0, 256.0, 512.0}) {
            const double a = std::abs(u0_hat(d, trial));
            const double b = std::abs(u0_hat(d, 0.5 * trial));
            if (a == 0.0) { xi_max = trial; ok = true; break; }
            const double k = std::log2(std::max(b / a, 1.0));
            const double tail = a * trial / std::max(k - 1.0, 0.2);
            if (tail <= tail_tol) { xi_max = trial; ok = true; break; }
        }
        if (!ok)
            throw ResolutionError("spectral tail does not reach tolerance " +
                                  std::to_string(tail_tol) + " by xi = 512");
    }
    std::vector<double> grid(static_cast<std::size_t>(m));
    const double dx = xi_max / (m - 1);
    for (int k = 0; k < m; ++k) grid[static_cast<std::size_t>(k)] = k * dx;
    return grid;
}

HalfLineSpectrum fourier_plus(const InitialDatum& d, const std::vector<double>& xi_grid) {
    HalfLineSpectrum out;
    out.xi_grid = xi_grid;
    out.values.assign(xi_grid.size(), 0.0);
    if (!d.is_zero()) {
        parallel_for(xi_grid.size(),
                     [&](std::size_t k) { out.values[k] = u0_hat(d, xi_grid[k]); });
    }
    if (xi_grid.size() >= 3) out.zero_limit = quadratic_to_zero(xi_grid, out.values);
    return out;
}

HalfLineSpectrum g_resolvent(const HalfLineSpectrum& f, cdouble x) {
    require_height(x);
    require_uniform(f.xi_grid);
    HalfLineSpectrum out = f;
    g_resolvent_inplace(out.values, x, f.xi_grid[1] - f.xi_grid[0]);
    out.zero_limit = quadratic_to_zero(out.xi_grid, out.values);
    return out;
}

Eigen::MatrixXcd toeplitz_matrix_symbol(const SpectralSymbol& b_hat,
                                        const std::vector<double>& xi_grid) {
    require_uniform(xi_grid);
    const int m = static_cast<int>(xi_grid.size());
    const double dx = xi_grid[1] - xi_grid[0];
    std::vector<cdouble> line_up(static_cast<std::size_t>(m));    // argument >= 0
    std::vector<cdouble> line_down(static_cast<std::size_t>(m));  // argument <= 0
    for (int k = 0; k < m; ++k) {
        line_up[static_cast<std::size_t>(k)] = b_hat(k * dx, +1);
        line_down[static_cast<std::size_t>(k)] = b_hat(-k * dx, -1);
    }
    Eigen::MatrixXcd mat(m, m);
    const double scale = dx / two_pi;
    for (int i = 0; i < m; ++i) {
        const std::vector<double> wa = endpoint_weights(i);          // eta in [0, xi_i]
        const std::vector<double> wb = endpoint_weights(m - 1 - i);  // eta in [xi_i, Xi]
        for (int j = 0; j < i; ++j)
            mat(i, j) = scale * wa[static_cast<std::size_t>(j)] *
                        line_up[static_cast<std::size_t>(i - j)];
        for (int j = i + 1; j < m; ++j)
            mat(i, j) = scale * wb[static_cast<std::size_t>(j - i)] *
                        line_down[static_cast<std::size_t>(j - i)];
        mat(i, i) = scale * (wa[static_cast<std::size_t>(i)] * line_up[0] +
                             wb[0] * line_down[0]);
    }
    return mat;
}

Eigen::MatrixXcd toeplitz_matrix(const InitialDatum& d, const std::vector<double>& xi_grid) {
    HalfLineSpectrum pos = fourier_plus(d, xi_grid);
    const auto symbol = [&](double xi, int) {
        const double a = std::abs(xi);
        const std::size_t k = static_cast<std::size_t>(
            std::llround(a / (xi_grid[1] - xi_grid[0])));
        const cdouble v = pos.values[std::min(k, pos.values.size() - 1)];
        return xi >= 0.0 ? v : std::conj(v);  // real symbol
    };
    return toeplitz_matrix_symbol(symbol, xi_grid);
}

HalfLineSpectrum toeplitz_apply_symbol(const SpectralSymbol& b_hat,
                                       const HalfLineSpectrum& f) {
    const Eigen::MatrixXcd mat = toeplitz_matrix_symbol(b_hat, f.xi_grid);
    Eigen::VectorXcd v(static_cast<Eigen::Index>(f.values.size()));
    for (std::size_t k = 0; k < f.values.size(); ++k)
        v(static_cast<Eigen::Index>(k)) = f.values[k];
    const Eigen::VectorXcd w = mat * v;
    HalfLineSpectrum out;
    out.xi_grid = f.xi_grid;
    out.values.resize(f.values.size());
    for (std::size_t k = 0; k < f.values.size(); ++k)
        out.values[k] = w(static_cast<Eigen::Index>(k));
    out.zero_limit = quadratic_to_zero(out.xi_grid, out.values);
    return out;
}

HalfLineSpectrum toeplitz_apply(const InitialDatum& d, const HalfLineSpectrum& f) {
    const Eigen::MatrixXcd mat = toeplitz_matrix(d, f.xi_grid);
    Eigen::VectorXcd v(static_cast<Eigen::Index>(f.values.size()));
    for (std::size_t k = 0; k < f.values.size(); ++k)
        v(static_cast<Eigen::Index>(k)) = f.values[k];
    const Eigen::VectorXcd w = mat * v;
    HalfLineSpectrum out;
    out.xi_grid = f.xi_grid;
    out.values.resize(f.values.size());
    for (std::size_t k = 0; k < f.values.size(); ++k)
        out.values[k] = w(static_cast<Eigen::Index>(k));
    out.zero_limit = quadratic_to_zero(out.xi_grid, out.values);
    return out;
}

HardyWorkspace make_hardy_workspace(const InitialDatum& d, double t, int m) {
    HardyWorkspace ws;
    ws.datum = d;
    ws.t = t;
    ws.xi_grid = hardy_grid(d, m);
    ws.u0_plus = fourier_plus(d, ws.xi_grid);
    if (t != 0.0) ws.toeplitz = toeplitz_matrix(d, ws.xi_grid);
    return ws;
}

HalfLineSpectrum solve_resolvent_cached(const HardyWorkspace& ws, cdouble x,
                                        SolveInfo* info) {
    require_height(x);
    const int m = static_cast<int>(ws.xi_grid.size());
    const double dx = ws.xi_grid[1] - ws.xi_grid[0];

    std::vector<cdouble> rhs = ws.u0_plus.values;
    g_resolvent_inplace(rhs, x, dx);

    HalfLineSpectrum out;
    out.xi_grid = ws.xi_grid;

    if (ws.t == 0.0 || ws.toeplitz.size() == 0) {
        out.values = rhs;
        if (info) *info = SolveInfo{1.0, 0.0, 0};
    } else {
        // columns of R_x T via the same backward sweep, then LU on Id + 2t R_x T
        Eigen::MatrixXcd a(m, m);
        std::vector<cdouble> col(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j) {
            for (int i = 0; i < m; ++i)
                col[static_cast<std::size_t>(i)] = ws.toeplitz(i, j);
            g_resolvent_inplace(col, x, dx);
            for (int i = 0; i < m; ++i)
                a(i, j) = 2.0 * ws.t * col[static_cast<std::size_t>(i)];
            a(j, j) += 1.0;
        }
        Eigen::VectorXcd b(m);
        for (int i = 0; i < m; ++i) b(i) = rhs[static_cast<std::size_t>(i)];
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
        const double rc = lu.rcond();
        if (!(rc > 1e-13))
            throw SolveFailure("resolvent system ill-conditioned at x = (" +
                                   std::to_string(x.real()) + ", " +
                                   std::to_string(x.imag()) + ")",
                               rc);
        const Eigen::VectorXcd sol = lu.solve(b);
        const double res = (a * sol - b).norm() / std::max(b.norm(), 1e-300);
        out.values.resize(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) out.values[static_cast<std::size_t>(i)] = sol(i);
        if (info) *info = SolveInfo{rc, res, 0};
    }
    out.zero_limit = quadratic_to_zero(out.xi_grid, out.values);
    return out;
}

HalfLineSpectrum solve_resolvent(const ResolventProblem& rp, SolveInfo* info) {
    HardyWorkspace ws;
    ws.datum = rp.datum;
    ws.t = rp.t;
    ws.xi_grid = rp.xi_grid;
    require_uniform(ws.xi_grid);
    ws.u0_plus = fourier_plus(rp.datum, ws.xi_grid);
    if (rp.t != 0.0) ws.toeplitz = toeplitz_matrix(rp.datum, ws.xi_grid);
    return solve_resolvent_cached(ws, rp.x, info);
}

HalfLineSpectrum solve_resolvent_neumann(const ResolventProblem& rp, int max_iters,
                                         SolveInfo* info) {
    require_height(rp.x);
    require_uniform(rp.xi_grid);
    const int m = static_cast<int>(rp.xi_grid.size());
    const double dx = rp.xi_grid[1] - rp.xi_grid[0];
    const HalfLineSpectrum u0p = fourier_plus(rp.datum, rp.xi_grid);
    std::vector<cdouble> rhs = u0p.values;
    g_resolvent_inplace(rhs, rp.x, dx);

    HalfLineSpectrum out;
    out.xi_grid = rp.xi_grid;
    if (rp.t == 0.0) {
        out.values = rhs;
        out.zero_limit = quadratic_to_zero(out.xi_grid, out.values);
        if (info) *info = SolveInfo{1.0, 0.0, 0};
        return out;
    }
    const Eigen::MatrixXcd tmat = toeplitz_matrix(rp.datum, rp.xi_grid);
    Eigen::VectorXcd f(m), b(m);
    for (int i = 0; i < m; ++i) {
        b(i) = rhs[static_cast<std::size_t>(i)];
        f(i) = b(i);
    }
    std::vector<cdouble> work(static_cast<std::size_t>(m));
    int iters = 0;
    double change = 0.0;
    for (; iters < max_iters; ++iters) {
        const Eigen::VectorXcd tf = tmat * f;
        for (int i = 0; i < m; ++i) work[static_cast<std::size_t>(i)] = tf(i);
        g_resolvent_inplace(work, rp.x, dx);
        Eigen::VectorXcd next(m);
        for (int i = 0; i < m; ++i)
            next(i) = b(i) - 2.0 * rp.t * work[static_cast<std::size_t>(i)];
        change = (next - f).norm() / std::max(next.norm(), 1e-300);
        f = next;
        if (change < 1e-13) break;
    }
    if (change > 1e-10)
        throw SolveFailure("fixed-point resolvent iteration did not converge "
                           "(relative change " + std::to_string(change) + ")",
                           change);
    out.values.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) out.values[static_cast<std::size_t>(i)] = f(i);
    out.zero_limit = quadratic_to_zero(out.xi_grid, out.values);
    if (info) *info = SolveInfo{-1.0, change, iters + 1};
    return out;
}

cdouble pi_u(const InitialDatum& d, double t, cdouble x, int m) {
    const HardyWorkspace ws = make_hardy_workspace(d, t, m);
    const HalfLineSpectrum f = solve_resolvent_cached(ws, x);
    return f.zero_limit / cdouble(0.0, two_pi);
}

ZDField boundary_trace(const InitialDatum& d, double t,
                       const std::vector<double>& xgrid, double sigma, int m) {
    if (!(sigma >= hardy_sigma_min))
        throw std::invalid_argument("sigma must be >= " + std::to_string(hardy_sigma_min));
    const HardyWorkspace ws = make_hardy_workspace(d, t, m);
    ZDField field;
    field.t = t;
    field.grid = xgrid;
    field.backend = "hardy";
    field.values.resize(xgrid.size());
    field.ell.assign(xgrid.size(), -1);  // branch counts are not observable here
    field.caustic.assign(xgrid.size(), 0);
    parallel_for(xgrid.size(), [&](std::size_t i) {
        const HalfLineSpectrum f =
            solve_resolvent_cached(ws, cdouble(xgrid[i], sigma));
        field.values[i] = 2.0 * (f.zero_limit / cdouble(0.0, two_pi)).real();
    });
    return field;
}

}  // namespace zd
