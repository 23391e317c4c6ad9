#pragma once

#include <string>
#include <utility>
#include <vector>

#include "zd/datum.hpp"

namespace zd {

// Solutions y_0 < ... < y_{2l} of y + 2t u0(y) = x together with the branch
// values u0(y_k) and the local monotonicity of y + 2t u0(y) at each root.
struct CharacteristicFan {
    double t = 0.0;
    double x = 0.0;
    std::vector<double> roots;
    std::vector<double> branch_values;
    std::vector<int> deriv_signs;
    bool caustic_flag = false;
    int ell() const { return (static_cast<int>(roots.size()) - 1) / 2; }
};

// Maximal interval between consecutive critical values with constant branch
// count; lo/hi are +-infinity at the ends.
struct CausticComponent {
    double lo;
    double hi;
    int ell;
};

struct CausticSet {
    double t = 0.0;
    std::vector<double> values;
    std::vector<CausticComponent> components;
};

struct ZDField {
    double t = 0.0;
    std::vector<double> grid;
    std::vector<double> values;
    std::vector<int> ell;
    std::vector<int> caustic;
    std::string backend;
};

// Smooth compactly supported bump exp(1 - 1/(1-s^2)) on ]lo,hi[, peak value 1.
struct TestFunction {
    double lo;
    double hi;
    double eval(double x) const;
    double deriv(double x) const;
    static TestFunction bump(double lo, double hi) { return {lo, hi}; }
};

// Caches the monotone-segment decomposition of y -> y + 2t u0(y) for one
// (datum, t) pair so that root fans for many x are cheap and cannot miss
// roots between located critical points.
class FanSolver {
  public:
    FanSolver(InitialDatum d, double t);

    double t() const { return t_; }
    const InitialDatum& datum() const { return d_; }
    const CausticSet& caustics() const { return caustics_; }

    CharacteristicFan solve(double x) const;
    double zd(double x) const;

    static constexpr double tol_root = 1e-12;
    static constexpr double tol_merge = 1e-8;
    static constexpr double tol_caustic = 1e-8;

  private:
    double map(double y) const { return y + 2.0 * t_ * d_.eval(y); }
    CharacteristicFan solve_once(double x) const;
    void build_smooth();
    void build_piecewise_linear();
    void build_components();

    InitialDatum d_;
    double t_;
    double sup_;
    std::vector<double> crit_pts_;
    std::vector<double> crit_map_vals_;
    CausticSet caustics_;
};

// One-shot wrappers around FanSolver.
CausticSet critical_values(const InitialDatum& d, double t);
CharacteristicFan solve_fan(const InitialDatum& d, double t, double x);
double zd_pointwise(const InitialDatum& d, double t, double x);
ZDField zd_grid(const InitialDatum& d, double t, const std::vector<double>& grid);

// Pairing of the multivalued-characteristics solution against phi without any
// root solving: integral of phi(y + 2t u0(y)) u0(y) (1 + 2t u0'(y)) dy.
double weak_pairing(const InitialDatum& d, double t, const TestFunction& phi);

// Pushforward of Lebesgue measure under y -> y + 2t u0(y) paired with phi.
double pushforward_pairing(const InitialDatum& d, double t, const TestFunction& phi);

// Distributional residual of dt u + dx(u^2) against a space-time bump
// psi(s,x) supported on window x [t-dt, t+dt]; the time derivative uses a
// centered 5-point stencil of spacing 1e-3.
double burgers_weak_residual(const InitialDatum& d, double t,
                             std::pair<double, double> window, double dt);

// Quadrature of a ZD profile against phi with caustic-value splits.
double field_pairing(const FanSolver& solver, const TestFunction& phi);

}  // namespace zd
