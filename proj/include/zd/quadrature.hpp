#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace zd::quad {

namespace detail {

// 15-point Kronrod extension of 7-point Gauss on [-1,1].
inline constexpr double kron_x[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr double kron_w[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double gauss_w[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Panel {
    double integral;
    double error;
};

template <class F>
Panel gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kron_x[i]);
        fv[14 - i] = f(c + h * kron_x[i]);
    }
    fv[7] = f(c);
    double resk = kron_w[7] * fv[7];
    double resg = gauss_w[3] * fv[7];
    for (int i = 0; i < 7; ++i) resk += kron_w[i] * (fv[i] + fv[14 - i]);
    for (int i = 0; i < 3; ++i) {
        const int j = 2 * i + 1;
        resg += gauss_w[i] * (fv[j] + fv[14 - j]);
    }
    Panel p;
    p.integral = resk * h;
    p.error = std::abs((resk - resg) * h);
    return p;
}

template <class F>
void refine(const F& f, double a, double b, double tol, int depth, double& acc) {
    const Panel p = gk15(f, a, b);
    if (p.error <= tol || depth >= 48 || b - a < 1e-14 * (1.0 + std::abs(a))) {
        acc += p.integral;
        return;
    }
    const double m = 0.5 * (a + b);
    refine(f, a, m, 0.5 * tol, depth + 1, acc);
    refine(f, m, b, 0.5 * tol, depth + 1, acc);
}

}  // namespace detail

// Adaptive Gauss-Kronrod integration of f over [a,b] to absolute tolerance.
template <class F>
double integrate(const F& f, double a, double b, double abs_tol = 1e-9) {
    if (!(a < b)) return a == b ? 0.0 : -integrate(f, b, a, abs_tol);
    double acc = 0.0;
    detail::refine(f, a, b, abs_tol, 0, acc);
    return acc;
}

// Same, but pre-split at the given interior break points (kinks, caustic
// values) so the adaptive refinement never straddles a known non-smooth point.
template <class F>
double integrate_split(const F& f, double a, double b, std::vector<double> breaks,
                       double abs_tol = 1e-9) {
    if (!(a < b)) return a == b ? 0.0 : -integrate_split(f, b, a, std::move(breaks), abs_tol);
    std::sort(breaks.begin(), breaks.end());
    std::vector<double> pts{a};
    for (double s : breaks)
        if (s > a + 1e-14 && s < b - 1e-14 && s > pts.back() + 1e-14) pts.push_back(s);
    pts.push_back(b);
    const double tol = abs_tol / static_cast<double>(pts.size() - 1);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        acc += integrate(f, pts[i], pts[i + 1], tol);
    return acc;
}

}  // namespace zd::quad
