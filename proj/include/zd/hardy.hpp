#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "zd/characteristics.hpp"
#include "zd/datum.hpp"
#include "zd/rational.hpp"

namespace zd {

// Smallest admissible height above the real axis; below it the dense system's
// conditioning degrades faster than the discretization error shrinks.
inline constexpr double hardy_sigma_min = 1e-3;

// Samples of a positive-frequency Fourier transform f_hat on [0, Xi].
// zero_limit holds the extracted boundary value f_hat(0+).
struct HalfLineSpectrum {
    std::vector<double> xi_grid;
    std::vector<cdouble> values;
    cdouble zero_limit{0.0, 0.0};
};

// Trapezoid L2 norm of the samples.
double spectrum_l2(const HalfLineSpectrum& f);

// Uniform grid [0, Xi] with m points. Xi is chosen so the tail mass of
// |u0_hat| beyond Xi is below tail_tol: closed-form bound for rational data,
// power-law fit for compactly supported data. Throws ResolutionError when the
// tolerance is unreachable (slowly decaying spectra).
std::vector<double> hardy_grid(const InitialDatum& d, int m = 2048,
                               double tail_tol = 1e-8);

// u0_hat(xi) for xi >= 0: residue closed form for rational data, adaptive
// oscillatory quadrature over the support otherwise.
HalfLineSpectrum fourier_plus(const InitialDatum& d,
                              const std::vector<double>& xi_grid);

// h = (G - x)^{-1} f via h_hat(xi) = i * int_xi^Xi f_hat(eta) e^{ix(eta-xi)}.
// Cells are integrated exactly against a cubic Hermite interpolant (4th-order
// finite-difference slopes), accumulated by one backward sweep. Requires
// Im x >= hardy_sigma_min.
HalfLineSpectrum g_resolvent(const HalfLineSpectrum& f, cdouble x);

// Fourier transform of a multiplier symbol b at real argument xi. side
// disambiguates a jump at xi == 0: +1 means the limit from above, -1 from
// below; ignored elsewhere.
using SpectralSymbol = std::function<cdouble(double xi, int side)>;

// Dense matrix of f_hat |-> (1/2pi) int_0^Xi b_hat(xi - eta) f_hat(eta) deta
// on the grid. Each row's eta-integral is split at eta = xi (where b_hat of a
// real symbol has a derivative kink) and both pieces get 4th-order
// endpoint-corrected trapezoid weights.
Eigen::MatrixXcd toeplitz_matrix_symbol(const SpectralSymbol& b_hat,
                                        const std::vector<double>& xi_grid);
Eigen::MatrixXcd toeplitz_matrix(const InitialDatum& d,
                                 const std::vector<double>& xi_grid);

HalfLineSpectrum toeplitz_apply(const InitialDatum& d, const HalfLineSpectrum& f);
HalfLineSpectrum toeplitz_apply_symbol(const SpectralSymbol& b_hat,
                                       const HalfLineSpectrum& f);

struct ResolventProblem {
    InitialDatum datum = InitialDatum::zero();
    double t = 0.0;
    cdouble x;
    std::vector<double> xi_grid;
};

struct SolveInfo {
    double rcond = 0.0;
    double residual = 0.0;   // relative residual of the assembled system
    int neumann_iters = 0;   // 0 for the dense route
};

// Grid, u0 spectrum, and Toeplitz matrix shared read-only across per-x solves.
struct HardyWorkspace {
    InitialDatum datum = InitialDatum::zero();
    double t = 0.0;
    std::vector<double> xi_grid;
    HalfLineSpectrum u0_plus;
    Eigen::MatrixXcd toeplitz;  // empty when t == 0
};

HardyWorkspace make_hardy_workspace(const InitialDatum& d, double t, int m = 2048);

// Solves (G + 2t T_{u0} - x) f = Pi u0 in the preconditioned form
// (Id + 2t R_x T) f = R_x Pi u0 with R_x = (G - x)^{-1}, by dense LU.
// zero_limit is the quadratic extrapolation of the three smallest grid nodes
// to xi = 0. Throws SolveFailure when the LU reports rcond below 1e-13.
HalfLineSpectrum solve_resolvent(const ResolventProblem& rp, SolveInfo* info = nullptr);
HalfLineSpectrum solve_resolvent_cached(const HardyWorkspace& ws, cdouble x,
                                        SolveInfo* info = nullptr);

// Fixed-point route f <- R_x(Pi u0 - 2t T f), contractive for
// Im x > 2|t| sup|u0|; same discrete operators as the dense route.
HalfLineSpectrum solve_resolvent_neumann(const ResolventProblem& rp,
                                         int max_iters = 400,
                                         SolveInfo* info = nullptr);

// Pi u(t,x) = zero_limit / (2 i pi) for Im x >= hardy_sigma_min.
cdouble pi_u(const InitialDatum& d, double t, cdouble x, int m = 2048);

// u_sigma(t,x) = 2 Re Pi u(t, x + i sigma): the harmonic (Poisson-smoothed)
// approximation of the dispersionless profile at height sigma. Parallel over
// grid points; the workspace is shared.
ZDField boundary_trace(const InitialDatum& d, double t,
                       const std::vector<double>& xgrid, double sigma,
                       int m = 512);

}  // namespace zd
