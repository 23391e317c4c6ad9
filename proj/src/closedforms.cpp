#include "zd/closedforms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "zd/errors.hpp"

namespace zd {

double zd_step(double t, double x) {
    if (t < 0.0) return zd_step(-t, -x);
    if (t == 0.0) return (x > -1.0 && x < 1.0) ? 1.0 : 0.0;
    if (x <= -1.0 || x > 2.0 * t + 1.0) return 0.0;
    if (t <= 1.0) {
        if (x <= 2.0 * t - 1.0) return (x + 1.0) / (2.0 * t);
        if (x <= 1.0) return 1.0;
        return 1.0 - (x - 1.0) / (2.0 * t);
    }
    if (x <= 1.0) return (x + 1.0) / (2.0 * t);
    if (x <= 2.0 * t - 1.0) return 1.0 / t;
    return 1.0 - (x - 1.0) / (2.0 * t);
}

double zd_piecewise_linear(const PiecewiseLinear& u, double t, double x) {
    const auto& bp = u.breakpoints;
    const auto& uv = u.values;
    struct Root {
        double y;
        double value;
    };
    std::vector<Root> roots;
    // outer pieces carry u = 0, so the characteristic map is the identity
    if (x <= bp.front()) roots.push_back({x, 0.0});
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        const double m = (uv[i + 1] - uv[i]) / (bp[i + 1] - bp[i]);
        const double slope = 1.0 + 2.0 * t * m;
        const double c = uv[i] - m * bp[i];
        if (std::abs(slope) < 1e-14) {
            // the whole piece maps to one point
            if (std::abs(x - (bp[i] + 2.0 * t * uv[i])) < 1e-12 * (1.0 + std::abs(x)))
                throw CausticHit("flat characteristic piece at x=" + std::to_string(x));
            continue;
        }
        const double y = (x - 2.0 * t * c) / slope;
        if (y >= bp[i] && y < bp[i + 1]) roots.push_back({y, uv[i] + m * (y - bp[i])});
    }
    if (x > bp.back()) roots.push_back({x, 0.0});
    std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) { return a.y < b.y; });
    if (roots.size() % 2 == 0)
        throw CausticHit("degenerate piecewise-linear fan at x=" + std::to_string(x));
    double acc = 0.0;
    for (std::size_t k = 0; k < roots.size(); ++k)
        acc += (k % 2 == 0 ? 1.0 : -1.0) * roots[k].value;
    return acc;
}

PiecewiseLinear step_tent_profile() { return PiecewiseLinear{{-1.0, 1.0, 3.0}, {0.0, 1.0, 0.0}}; }

SemigroupGap semigroup_gap(double s) {
    if (!(s > 0.0 && s < 1.0))
        throw std::invalid_argument("semigroup gap defined for 0 < s < 1");
    // witness point in the interior of the region where the restarted profile
    // keeps rising but the one-shot profile already sits on its 1/t plateau
    const double x = 1.0 + s;
    const double lhs = zd_piecewise_linear(step_tent_profile(), s, x);
    const double rhs = zd_step(1.0 + s, x);
    return {s, x, std::abs(lhs - rhs)};
}

}  // namespace zd
