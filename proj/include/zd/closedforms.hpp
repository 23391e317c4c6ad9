#pragma once

#include "zd/datum.hpp"

namespace zd {

// Exact zero-dispersion profile for the unit-height step datum on ]-1,1[.
// Defined for all t via the symmetry zd(-t,-x) = zd(t,x).
double zd_step(double t, double x);

// Exact zero-dispersion value for a compactly supported piecewise-linear
// datum via per-piece root enumeration (no quadrature). Throws CausticHit for
// queries on a flat characteristic piece.
double zd_piecewise_linear(const PiecewiseLinear& u, double t, double x);

struct SemigroupGap {
    double s;
    double x_witness;
    double gap;
};

// Discrepancy between the two-step evolution (restart from the t=1 tent
// profile, evolve s further) and the one-shot evolution to time 1+s of the
// step datum, evaluated at the plateau-mismatch witness x = 1+s.
SemigroupGap semigroup_gap(double s);

// The t=1 profile of the step datum as an exact piecewise-linear datum
// (tent on [-1,3] with peak 1 at x=1).
PiecewiseLinear step_tent_profile();

}  // namespace zd
