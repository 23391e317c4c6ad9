#pragma once

#include <complex>
#include <vector>

#include "zd/characteristics.hpp"
#include "zd/datum.hpp"

namespace zd {

using cdouble = std::complex<double>;

// Coefficients (ascending degree) of (y - x) Q(y) + 2t P(y), where Q is the
// monic denominator of the rational datum and P = u0 Q. Degree 2N+1.
struct CharPoly {
    std::vector<cdouble> coeffs;
};

struct RootClassification {
    std::vector<cdouble> all_roots;
    std::vector<double> real_roots;     // ascending, count 2l+1
    std::vector<cdouble> upper_roots;   // Im > 0, count N-l
    std::vector<cdouble> selected;      // even-index real roots + upper roots
    int ell = 0;
};

struct LambdaSystem {
    cdouble lambda;
    std::vector<cdouble> mu;
    // max over selected roots z of |u0(z) + lambda + sum_j mu_j/(z-p_j)|
    double residual;
};

CharPoly char_poly(const Rational& d, double t, cdouble x);

// All roots of a polynomial via its companion matrix, each polished by two
// Newton steps.
std::vector<cdouble> poly_roots(const std::vector<cdouble>& coeffs);

// Throws CausticHit when a root is repeated within 1e-8; borderline
// real/complex roots are re-classified by solving at x + i*1e-6 and tracking
// which partners move up.
RootClassification classify_roots(const Rational& d, double t, double x);

// lambda = (sum of selected roots - sum of poles - x) / (2t).
cdouble lambda_direct(const Rational& d, double t, double x);

// Solve the (N+1)x(N+1) collocation system for (lambda, mu) directly.
LambdaSystem lambda_system(const Rational& d, double t, double x);

// Zero-dispersion value -2 Re lambda (u0(x) at t = 0).
double zd_rational(const Rational& d, double t, double x);

ZDField zd_grid_rational(const Rational& d, double t, const std::vector<double>& grid);

// Ratio of the two Cauchy-Vandermonde-bordered determinants, which collapses
// to sum(z) - sum(p). Sizes: |z| = |p| + 1.
cdouble cauchy_vandermonde_ratio(const std::vector<cdouble>& z, const std::vector<cdouble>& p);

// Perturb coinciding poles into simple ones (distinct directions, magnitude
// eps), preserving Im > 0.
Rational split_poles(const Rational& d, double eps = 1e-6);

}  // namespace zd
