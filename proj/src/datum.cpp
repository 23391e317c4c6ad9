#include "zd/datum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "zd/quadrature.hpp"

namespace zd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Normalized bump kernel on [-1,1]: integral one, C^2 at the endpoints.
double bump_kernel(double s) {
    if (std::abs(s) >= 1.0) return 0.0;
    const double w = 1.0 - s * s;
    return (35.0 / 32.0) * w * w * w;
}

double bump_kernel_deriv(double s) {
    if (std::abs(s) >= 1.0) return 0.0;
    const double w = 1.0 - s * s;
    return (35.0 / 32.0) * 3.0 * w * w * (-2.0 * s);
}

// integral of smoothstep_ramp(s)^2 over [0,1]
double ramp_square_mass() {
    return 100.0 / 7.0 - 300.0 / 8.0 + 345.0 / 9.0 - 180.0 / 10.0 + 36.0 / 11.0;
}

int hermite_cell(const SampledC1& s, double y) {
    // index i with nodes[i] <= y <= nodes[i+1], or -1 when outside
    if (y < s.nodes.front() || y > s.nodes.back()) return -1;
    auto it = std::upper_bound(s.nodes.begin(), s.nodes.end(), y);
    int i = static_cast<int>(it - s.nodes.begin()) - 1;
    if (i < 0) i = 0;
    if (i >= static_cast<int>(s.nodes.size()) - 1) i = static_cast<int>(s.nodes.size()) - 2;
    return i;
}

double hermite_eval(const SampledC1& d, double y) {
    if (std::abs(y) > d.decay_bound) return 0.0;
    const int i = hermite_cell(d, y);
    if (i < 0) return 0.0;
    const double h = d.nodes[i + 1] - d.nodes[i];
    const double s = (y - d.nodes[i]) / h;
    const double s1 = 1.0 - s;
    const double h00 = (1.0 + 2.0 * s) * s1 * s1;
    const double h10 = s * s1 * s1;
    const double h01 = s * s * (3.0 - 2.0 * s);
    const double h11 = s * s * (s - 1.0);
    return d.values[i] * h00 + h * d.derivs[i] * h10 + d.values[i + 1] * h01 +
           h * d.derivs[i + 1] * h11;
}

double hermite_deriv(const SampledC1& d, double y) {
    if (std::abs(y) > d.decay_bound) return 0.0;
    const int i = hermite_cell(d, y);
    if (i < 0) return 0.0;
    const double h = d.nodes[i + 1] - d.nodes[i];
    const double s = (y - d.nodes[i]) / h;
    const double g00 = (6.0 * s * s - 6.0 * s) / h;
    const double g10 = 3.0 * s * s - 4.0 * s + 1.0;
    const double g01 = (6.0 * s - 6.0 * s * s) / h;
    const double g11 = 3.0 * s * s - 2.0 * s;
    return d.values[i] * g00 + d.derivs[i] * g10 + d.values[i + 1] * g01 + d.derivs[i + 1] * g11;
}

double rational_eval(const Rational& r, double y) {
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < r.poles.size(); ++j) {
        acc += r.residues[j] / (y - r.poles[j]);
        acc += std::conj(r.residues[j]) / (y - std::conj(r.poles[j]));
    }
    return acc.real();
}

double rational_deriv(const Rational& r, double y) {
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < r.poles.size(); ++j) {
        const std::complex<double> a = y - r.poles[j];
        const std::complex<double> b = y - std::conj(r.poles[j]);
        acc -= r.residues[j] / (a * a);
        acc -= std::conj(r.residues[j]) / (b * b);
    }
    return acc.real();
}

double pl_eval(const PiecewiseLinear& p, double y) {
    if (y <= p.breakpoints.front() || y >= p.breakpoints.back()) return 0.0;
    auto it = std::upper_bound(p.breakpoints.begin(), p.breakpoints.end(), y);
    const int i = static_cast<int>(it - p.breakpoints.begin()) - 1;
    const double h = p.breakpoints[i + 1] - p.breakpoints[i];
    const double s = (y - p.breakpoints[i]) / h;
    return p.values[i] * (1.0 - s) + p.values[i + 1] * s;
}

bool is_step_mollified(const Mollified& m) { return m.base->get_if<Step>() != nullptr; }

double mollified_step_eval(const Step& st, double delta, double y) {
    if (y <= st.left - delta || y >= st.right + delta) return 0.0;
    if (y >= st.left && y <= st.right) return st.height;
    if (y < st.left) return st.height * smoothstep_ramp((y - (st.left - delta)) / delta);
    return st.height * smoothstep_ramp(((st.right + delta) - y) / delta);
}

double mollified_step_deriv(const Step& st, double delta, double y) {
    if (y <= st.left - delta || y >= st.right + delta) return 0.0;
    if (y >= st.left && y <= st.right) return 0.0;
    if (y < st.left)
        return st.height * smoothstep_ramp_deriv((y - (st.left - delta)) / delta) / delta;
    return -st.height * smoothstep_ramp_deriv(((st.right + delta) - y) / delta) / delta;
}

// Convolution integral for a general mollified base, split where the shifted
// base is non-smooth.
double mollified_generic(const Mollified& m, double y, bool deriv) {
    const double delta = m.delta;
    std::vector<double> breaks;
    for (double s : m.base->singular_points()) {
        const double u = (y - s) / delta;
        if (u > -1.0 && u < 1.0) breaks.push_back(u);
    }
    const auto f = [&](double s) {
        const double w = deriv ? bump_kernel_deriv(s) : bump_kernel(s);
        return m.base->eval(y - delta * s) * w;
    };
    const double v = quad::integrate_split(f, -1.0, 1.0, breaks, 1e-12);
    return deriv ? v / delta : v;
}

}  // namespace

double smoothstep_ramp(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

double smoothstep_ramp_deriv(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    const double w = 1.0 - s;
    return 30.0 * s * s * w * w;
}

InitialDatum::InitialDatum(Variant v) : v_(std::move(v)) {
    if (const auto* s = std::get_if<SampledC1>(&v_)) {
        if (s->nodes.size() < 2 || s->nodes.size() != s->values.size() ||
            s->nodes.size() != s->derivs.size())
            throw std::invalid_argument("sampled datum: need matching nodes/values/derivs");
        if (!std::is_sorted(s->nodes.begin(), s->nodes.end()))
            throw std::invalid_argument("sampled datum: nodes must ascend");
        if (!(s->decay_bound > 0.0))
            throw std::invalid_argument("sampled datum: decay bound must be positive");
    } else if (const auto* r = std::get_if<Rational>(&v_)) {
        if (r->poles.size() != r->residues.size())
            throw std::invalid_argument("rational datum: poles/residues size mismatch");
        for (const auto& p : r->poles)
            if (!(p.imag() > 0.0))
                throw std::invalid_argument("rational datum: poles must have Im > 0");
        for (std::size_t i = 0; i < r->poles.size(); ++i)
            for (std::size_t j = i + 1; j < r->poles.size(); ++j)
                if (std::abs(r->poles[i] - r->poles[j]) < 1e-12)
                    throw std::invalid_argument(
                        "rational datum: poles must be simple (use split_poles)");
    } else if (const auto* st = std::get_if<Step>(&v_)) {
        if (!(st->left < st->right)) throw std::invalid_argument("step datum: left < right");
    } else if (const auto* p = std::get_if<PiecewiseLinear>(&v_)) {
        if (p->breakpoints.size() < 2 || p->breakpoints.size() != p->values.size())
            throw std::invalid_argument("piecewise linear datum: size mismatch");
        if (!std::is_sorted(p->breakpoints.begin(), p->breakpoints.end()))
            throw std::invalid_argument("piecewise linear datum: breakpoints must ascend");
        if (p->values.front() != 0.0 || p->values.back() != 0.0)
            throw std::invalid_argument("piecewise linear datum: endpoint values must vanish");
    } else if (const auto* m = std::get_if<Mollified>(&v_)) {
        if (!m->base) throw std::invalid_argument("mollified datum: missing base");
        if (!(m->delta > 0.0)) throw std::invalid_argument("mollified datum: delta > 0");
    }
}

InitialDatum InitialDatum::make_step(double left, double right, double height) {
    return InitialDatum(Step{left, right, height});
}

InitialDatum InitialDatum::make_rational(std::vector<std::complex<double>> poles,
                                         std::vector<std::complex<double>> residues) {
    return InitialDatum(Rational{std::move(poles), std::move(residues)});
}

InitialDatum InitialDatum::make_piecewise_linear(std::vector<double> breakpoints,
                                                 std::vector<double> values) {
    return InitialDatum(PiecewiseLinear{std::move(breakpoints), std::move(values)});
}

InitialDatum InitialDatum::make_sampled(std::vector<double> nodes, std::vector<double> values,
                                        std::vector<double> derivs, double decay_bound) {
    return InitialDatum(SampledC1{std::move(nodes), std::move(values), std::move(derivs),
                                  decay_bound});
}

InitialDatum InitialDatum::zero() { return InitialDatum(Rational{{}, {}}); }

double InitialDatum::eval(double y) const {
    return std::visit(
        [&](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, SampledC1>) return hermite_eval(d, y);
            if constexpr (std::is_same_v<T, Rational>) return rational_eval(d, y);
            if constexpr (std::is_same_v<T, Step>)
                return (y > d.left && y < d.right) ? d.height : 0.0;
            if constexpr (std::is_same_v<T, PiecewiseLinear>) return pl_eval(d, y);
            if constexpr (std::is_same_v<T, Mollified>) {
                if (const auto* st = d.base->template get_if<Step>())
                    return mollified_step_eval(*st, d.delta, y);
                return mollified_generic(d, y, false);
            }
        },
        v_);
}

double InitialDatum::eval_deriv(double y) const {
    return std::visit(
        [&](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, SampledC1>) return hermite_deriv(d, y);
            if constexpr (std::is_same_v<T, Rational>) return rational_deriv(d, y);
            if constexpr (std::is_same_v<T, Step>) {
                if (y == d.left || y == d.right)
                    throw std::invalid_argument("step datum has no derivative at its jumps");
                return 0.0;
            }
            if constexpr (std::is_same_v<T, PiecewiseLinear>) {
                if (std::binary_search(d.breakpoints.begin(), d.breakpoints.end(), y))
                    throw std::invalid_argument(
                        "piecewise linear datum has no derivative at a breakpoint");
                if (y < d.breakpoints.front() || y > d.breakpoints.back()) return 0.0;
                auto it = std::upper_bound(d.breakpoints.begin(), d.breakpoints.end(), y);
                const int i = static_cast<int>(it - d.breakpoints.begin()) - 1;
                return (d.values[i + 1] - d.values[i]) /
                       (d.breakpoints[i + 1] - d.breakpoints[i]);
            }
            if constexpr (std::is_same_v<T, Mollified>) {
                if (const auto* st = d.base->template get_if<Step>())
                    return mollified_step_deriv(*st, d.delta, y);
                return mollified_generic(d, y, true);
            }
        },
        v_);
}

bool InitialDatum::is_c1() const { return get_if<Step>() == nullptr; }

bool InitialDatum::is_zero() const {
    if (const auto* r = get_if<Rational>()) return r->poles.empty();
    return false;
}

double InitialDatum::sup_bound() const {
    return std::visit(
        [&](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, SampledC1>) {
                double mv = 0.0, md = 0.0, mh = 0.0;
                for (double v : d.values) mv = std::max(mv, std::abs(v));
                for (double v : d.derivs) md = std::max(md, std::abs(v));
                for (std::size_t i = 0; i + 1 < d.nodes.size(); ++i)
                    mh = std::max(mh, d.nodes[i + 1] - d.nodes[i]);
                return mv + 0.3 * mh * md;
            }
            if constexpr (std::is_same_v<T, Rational>) {
                double acc = 0.0;
                for (std::size_t j = 0; j < d.poles.size(); ++j)
                    acc += 2.0 * std::abs(d.residues[j]) / d.poles[j].imag();
                return acc;
            }
            if constexpr (std::is_same_v<T, Step>) return std::abs(d.height);
            if constexpr (std::is_same_v<T, PiecewiseLinear>) {
                double mv = 0.0;
                for (double v : d.values) mv = std::max(mv, std::abs(v));
                return mv;
            }
            if constexpr (std::is_same_v<T, Mollified>) return d.base->sup_bound();
        },
        v_);
}

double InitialDatum::deriv_sup_bound() const {
    return std::visit(
        [&](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, SampledC1>) {
                double md = 0.0, slope = 0.0;
                for (double v : d.derivs) md = std::max(md, std::abs(v));
                for (std::size_t i = 0; i + 1 < d.nodes.size(); ++i)
                    slope = std::max(slope, std::abs(d.values[i + 1] - d.values[i]) /
                                                (d.nodes[i + 1] - d.nodes[i]));
                return 1.5 * slope + 2.0 * md;
            }
            if constexpr (std::is_same_v<T, Rational>) {
                double acc = 0.0;
                for (std::size_t j = 0; j < d.poles.size(); ++j) {
                    const double b = d.poles[j].imag();
                    acc += 2.0 * std::abs(d.residues[j]) / (b * b);
                }
                return acc;
            }
            if constexpr (std::is_same_v<T, Step>) return kInf;
            if constexpr (std::is_same_v<T, PiecewiseLinear>) {
                double slope = 0.0;
                for (std::size_t i = 0; i + 1 < d.breakpoints.size(); ++i)
                    slope = std::max(slope, std::abs(d.values[i + 1] - d.values[i]) /
                                                (d.breakpoints[i + 1] - d.breakpoints[i]));
                return slope;
            }
            if constexpr (std::is_same_v<T, Mollified>) {
                if (const auto* st = d.base->template get_if<Step>())
                    return 1.875 * std::abs(st->height) / d.delta;
                const double via_kernel = 1.878 * d.base->sup_bound() / d.delta;
                const double via_base = d.base->deriv_sup_bound();
                return std::min(via_kernel, via_base);
            }
        },
        v_);
}

double InitialDatum::support_radius() const {
    return std::visit(
        [&](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, SampledC1>)
                return std::min(d.decay_bound,
                                std::max(std::abs(d.nodes.front()), std::abs(d.nodes.back())));
            if constexpr (std::is_same_v<T, Rational>) return d.poles.empty() ? 0.0 : kInf;
            if constexpr (std::is_same_v<T, Step>)
                return std::max(std::abs(d.left), std::abs(d.right));
            if constexpr (std::is_same_v<T, PiecewiseLinear>)
                return std::max(std::abs(d.breakpoints.front()),
                                std::abs(d.breakpoints.back()));
            if constexpr (std::is_same_v<T, Mollified>)
                return d.base->support_radius() + d.delta;
        },
        v_);
}

double InitialDatum::feature_scale() const {
    return std::visit(
        [&](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, SampledC1>) {
                double g = kInf;
                for (std::size_t i = 0; i + 1 < d.nodes.size(); ++i)
                    g = std::min(g, d.nodes[i + 1] - d.nodes[i]);
                return g;
            }
            if constexpr (std::is_same_v<T, Rational>) {
                double b = kInf;
                for (const auto& p : d.poles) b = std::min(b, p.imag());
                return d.poles.empty() ? 1.0 : b / 8.0;
            }
            if constexpr (std::is_same_v<T, Step>) return (d.right - d.left) / 8.0;
            if constexpr (std::is_same_v<T, PiecewiseLinear>) {
                double g = kInf;
                for (std::size_t i = 0; i + 1 < d.breakpoints.size(); ++i)
                    g = std::min(g, d.breakpoints[i + 1] - d.breakpoints[i]);
                return g / 8.0;
            }
            if constexpr (std::is_same_v<T, Mollified>) return d.delta / 8.0;
        },
        v_);
}

double InitialDatum::critical_scan_radius(double t) const {
    if (const auto* r = get_if<Rational>()) {
        if (r->poles.empty()) return 1.0;
        double pmax = 0.0, csum = 0.0;
        for (std::size_t j = 0; j < r->poles.size(); ++j) {
            pmax = std::max(pmax, std::abs(r->poles[j].real()) + r->poles[j].imag());
            csum += std::abs(r->residues[j]);
        }
        return pmax + std::sqrt(8.0 * std::abs(t) * csum) + 1.0;
    }
    (void)t;
    return support_radius() + 1e-9 + 1e-9 * support_radius();
}

std::vector<double> InitialDatum::singular_points() const {
    return std::visit(
        [&](const auto& d) -> std::vector<double> {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, SampledC1>)
                return {d.nodes.front(), d.nodes.back()};
            if constexpr (std::is_same_v<T, Rational>) return {};
            if constexpr (std::is_same_v<T, Step>) return {d.left, d.right};
            if constexpr (std::is_same_v<T, PiecewiseLinear>) return d.breakpoints;
            if constexpr (std::is_same_v<T, Mollified>) {
                std::vector<double> out;
                for (double s : d.base->singular_points()) {
                    out.push_back(s - d.delta);
                    out.push_back(s + d.delta);
                    out.push_back(s);
                }
                std::sort(out.begin(), out.end());
                return out;
            }
        },
        v_);
}

namespace {

// L-infinity estimate by dense scan with parabolic refinement at the best cell.
double scan_linf(const InitialDatum& d, double radius, double pitch) {
    const long n_raw = static_cast<long>(2.0 * radius / pitch) + 1;
    const long n = std::clamp(n_raw, 101L, 400001L);
    double best = 0.0;
    double best_y = 0.0;
    for (long i = 0; i < n; ++i) {
        const double y = -radius + 2.0 * radius * static_cast<double>(i) /
                                       static_cast<double>(n - 1);
        const double v = std::abs(d.eval(y));
        if (v > best) {
            best = v;
            best_y = y;
        }
    }
    const double h = 2.0 * radius / static_cast<double>(n - 1);
    double lo = best_y - h, hi = best_y + h;
    for (int it = 0; it < 60; ++it) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (std::abs(d.eval(m1)) < std::abs(d.eval(m2)))
            lo = m1;
        else
            hi = m2;
    }
    return std::max(best, std::abs(d.eval(0.5 * (lo + hi))));
}

}  // namespace

Norms InitialDatum::norms() const {
    if (is_zero()) return {0.0, 0.0};
    if (const auto* st = get_if<Step>()) {
        return {std::abs(st->height) * std::sqrt(st->right - st->left), std::abs(st->height)};
    }
    if (const auto* p = get_if<PiecewiseLinear>()) {
        double acc = 0.0, linf = 0.0;
        for (std::size_t i = 0; i + 1 < p->breakpoints.size(); ++i) {
            const double h = p->breakpoints[i + 1] - p->breakpoints[i];
            const double a = p->values[i], b = p->values[i + 1];
            acc += h * (a * a + a * b + b * b) / 3.0;
            linf = std::max(linf, std::abs(a));
        }
        return {std::sqrt(acc), linf};
    }
    if (const auto* m = get_if<Mollified>()) {
        if (const auto* st = m->base->get_if<Step>()) {
            const double h2 = st->height * st->height;
            const double core = h2 * (st->right - st->left);
            const double ramps = 2.0 * m->delta * h2 * ramp_square_mass();
            return {std::sqrt(core + ramps), std::abs(st->height)};
        }
    }
    if (const auto* r = get_if<Rational>()) {
        // contour integral of u0^2 over the upper half plane
        std::complex<double> acc = 0.0;
        const std::size_t n = r->poles.size();
        for (std::size_t j = 0; j < n; ++j) {
            std::complex<double> rest = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                if (k != j) rest += r->residues[k] / (r->poles[j] - r->poles[k]);
                rest += std::conj(r->residues[k]) / (r->poles[j] - std::conj(r->poles[k]));
            }
            acc += 2.0 * r->residues[j] * rest;
        }
        const double l2sq = (std::complex<double>(0.0, 2.0 * M_PI) * acc).real();
        double pmax = 0.0;
        for (const auto& p : r->poles) pmax = std::max(pmax, std::abs(p.real()) + p.imag());
        const double linf = scan_linf(*this, pmax + 12.0, feature_scale() / 2.0);
        return {std::sqrt(std::max(0.0, l2sq)), linf};
    }
    // sampled and generic mollified: quadrature over the support
    const double R = support_radius();
    double l2sq = 0.0;
    if (const auto* s = get_if<SampledC1>()) {
        // one Kronrod panel per cell is exact for the cell-wise polynomial
        for (std::size_t i = 0; i + 1 < s->nodes.size(); ++i)
            l2sq += quad::detail::gk15([&](double y) { return eval(y) * eval(y); },
                                       s->nodes[i], s->nodes[i + 1])
                        .integral;
    } else {
        l2sq = quad::integrate_split([&](double y) { return eval(y) * eval(y); }, -R, R,
                                     singular_points(), 1e-12);
    }
    const double linf = scan_linf(*this, R, feature_scale() / 2.0);
    return {std::sqrt(std::max(0.0, l2sq)), linf};
}

InitialDatum mollify(const InitialDatum& d, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("mollify: delta must be positive");
    if (d.is_zero()) return d;
    return InitialDatum(Mollified{std::make_shared<InitialDatum>(d), delta});
}

InitialDatum scaled(const InitialDatum& d, double factor) {
    return std::visit(
        [&](const auto& v) -> InitialDatum {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, SampledC1>) {
                SampledC1 out = v;
                for (double& x : out.values) x *= factor;
                for (double& x : out.derivs) x *= factor;
                return InitialDatum(out);
            }
            if constexpr (std::is_same_v<T, Rational>) {
                Rational out = v;
                for (auto& c : out.residues) c *= factor;
                return InitialDatum(out);
            }
            if constexpr (std::is_same_v<T, Step>)
                return InitialDatum(Step{v.left, v.right, v.height * factor});
            if constexpr (std::is_same_v<T, PiecewiseLinear>) {
                PiecewiseLinear out = v;
                for (double& x : out.values) x *= factor;
                return InitialDatum(out);
            }
            if constexpr (std::is_same_v<T, Mollified>)
                return InitialDatum(Mollified{
                    std::make_shared<InitialDatum>(scaled(*v.base, factor)), v.delta});
        },
        d.variant());
}

InitialDatum sampled_from(const std::function<double(double)>& f,
                          const std::function<double(double)>& df, double lo, double hi,
                          int n, double decay_bound) {
    std::vector<double> nodes(n), values(n), derivs(n);
    for (int i = 0; i < n; ++i) {
        const double y = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        nodes[i] = y;
        values[i] = f(y);
        derivs[i] = df(y);
    }
    return InitialDatum::make_sampled(std::move(nodes), std::move(values), std::move(derivs),
                                      decay_bound);
}

namespace {

using nlohmann::json;

json complex_to_json(const std::complex<double>& z) { return json::array({z.real(), z.imag()}); }

std::complex<double> complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2)
        throw std::invalid_argument("complex entries must be [re,im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

json to_json_impl(const InitialDatum& d) {
    json j;
    if (d.is_zero()) {
        j["type"] = "zero";
        return j;
    }
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, SampledC1>) {
                j["type"] = "sampled";
                j["nodes"] = v.nodes;
                j["values"] = v.values;
                j["derivs"] = v.derivs;
                j["decay_bound"] = v.decay_bound;
            }
            if constexpr (std::is_same_v<T, Rational>) {
                j["type"] = "rational";
                j["poles"] = json::array();
                j["residues"] = json::array();
                for (const auto& p : v.poles) j["poles"].push_back(complex_to_json(p));
                for (const auto& c : v.residues) j["residues"].push_back(complex_to_json(c));
            }
            if constexpr (std::is_same_v<T, Step>) {
                j["type"] = "step";
                j["left"] = v.left;
                j["right"] = v.right;
                j["height"] = v.height;
            }
            if constexpr (std::is_same_v<T, PiecewiseLinear>) {
                j["type"] = "piecewise_linear";
                j["breakpoints"] = v.breakpoints;
                j["values"] = v.values;
            }
            if constexpr (std::is_same_v<T, Mollified>) {
                j["type"] = "mollified";
                j["base"] = to_json_impl(*v.base);
                j["delta"] = v.delta;
            }
        },
        d.variant());
    return j;
}

InitialDatum from_json_impl(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "zero") return InitialDatum::zero();
    if (type == "step")
        return InitialDatum::make_step(j.at("left").get<double>(), j.at("right").get<double>(),
                                       j.at("height").get<double>());
    if (type == "rational") {
        std::vector<std::complex<double>> poles, residues;
        for (const auto& e : j.at("poles")) poles.push_back(complex_from_json(e));
        for (const auto& e : j.at("residues")) residues.push_back(complex_from_json(e));
        return InitialDatum::make_rational(std::move(poles), std::move(residues));
    }
    if (type == "sampled") {
        auto nodes = j.at("nodes").get<std::vector<double>>();
        auto values = j.at("values").get<std::vector<double>>();
        auto derivs = j.at("derivs").get<std::vector<double>>();
        double bound = j.contains("decay_bound")
                           ? j.at("decay_bound").get<double>()
                           : std::max(std::abs(nodes.front()), std::abs(nodes.back()));
        return InitialDatum::make_sampled(std::move(nodes), std::move(values),
                                          std::move(derivs), bound);
    }
    if (type == "piecewise_linear")
        return InitialDatum::make_piecewise_linear(
            j.at("breakpoints").get<std::vector<double>>(),
            j.at("values").get<std::vector<double>>());
    if (type == "mollified")
        return mollify(from_json_impl(j.at("base")), j.at("delta").get<double>());
    throw std::invalid_argument("unknown datum type: " + type);
}

}  // namespace

InitialDatum datum_from_json(const std::string& text) {
    return from_json_impl(json::parse(text));
}

std::string datum_to_json(const InitialDatum& d) { return to_json_impl(d).dump(); }

}  // namespace zd
