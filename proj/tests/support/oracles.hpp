#pragma once

// Small independent oracles shared by the unit tests. Everything here is
// computed by elementary means (Newton iteration, closed forms) so the tests
// never validate library code against itself.

#include <cmath>
#include <complex>

#include "zd/datum.hpp"

namespace testing_support {

// u0(y) = a / (1 + y^2) as a rational datum: pole i, residue -a i / 2.
inline zd::InitialDatum lorentzian(double a = 1.0) {
    return zd::InitialDatum::make_rational({{0.0, 1.0}}, {{0.0, -0.5 * a}});
}

// Unique real solution of y + 2 t a/(1+y^2) = x for |t| below the breaking
// time, by bisection-seeded Newton on the cubic (y - x)(1 + y^2) + 2 t a = 0.
inline double lorentzian_characteristic_root(double a, double t, double x) {
    const auto f = [&](double y) { return (y - x) * (1.0 + y * y) + 2.0 * t * a; };
    const auto df = [&](double y) { return (1.0 + y * y) + 2.0 * y * (y - x); };
    double lo = x - 2.0 * std::abs(t) * std::abs(a) - 1.0;
    double hi = x + 2.0 * std::abs(t) * std::abs(a) + 1.0;
    double y = 0.5 * (lo + hi);
    for (int i = 0; i < 200; ++i) {
        const double fy = f(y);
        if (fy > 0.0)
            hi = y;
        else
            lo = y;
        const double step = fy / df(y);
        if (std::abs(step) < 1e-15 * (1.0 + std::abs(y))) break;
        const double cand = y - step;
        y = (cand > lo && cand < hi) ? cand : 0.5 * (lo + hi);
    }
    return y;
}

inline double lorentzian_zd_oracle(double a, double t, double x) {
    const double y = lorentzian_characteristic_root(a, t, x);
    return a / (1.0 + y * y);
}

}  // namespace testing_support
