#pragma once

#include <stdexcept>
#include <string>

namespace zd {

// Raised when a query lands on (or within tolerance of) a caustic point:
// a degenerate characteristic configuration such as a double root.
struct CausticHit : std::runtime_error {
    explicit CausticHit(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a linear solve cannot be trusted (ill-conditioning, residual
// above tolerance). Carries the estimated reciprocal condition number.
struct SolveFailure : std::runtime_error {
    SolveFailure(const std::string& what, double rcond_estimate)
        : std::runtime_error(what + " (rcond ~ " + std::to_string(rcond_estimate) + ")"),
          rcond(rcond_estimate) {}
    double rcond;
};

// Raised when a pseudo-spectral run would be under-resolved for the
// requested dispersion parameter.
struct ResolutionError : std::runtime_error {
    explicit ResolutionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace zd
