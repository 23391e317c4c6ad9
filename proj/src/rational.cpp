#include "zd/rational.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "zd/errors.hpp"
#include "zd/parallel.hpp"

namespace zd {

namespace {

using Poly = std::vector<cdouble>;  // ascending coefficients

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

// exact synthetic division of a by (y - r) when r is a root
Poly poly_deflate(const Poly& a, cdouble r) {
    Poly out(a.size() - 1, 0.0);
    cdouble carry = a.back();
    for (std::size_t i = a.size() - 1; i-- > 0;) {
        out[i] = carry;
        carry = a[i] + carry * r;
    }
    return out;
}

cdouble poly_eval(const Poly& a, cdouble y) {
    cdouble acc = 0.0;
    for (std::size_t i = a.size(); i-- > 0;) acc = acc * y + a[i];
    return acc;
}

cdouble poly_eval_deriv(const Poly& a, cdouble y) {
    cdouble acc = 0.0;
    for (std::size_t i = a.size(); i-- > 1;)
        acc = acc * y + a[i] * static_cast<double>(i);
    return acc;
}

cdouble u0_complex(const Rational& d, cdouble y) {
    cdouble acc = 0.0;
    for (std::size_t j = 0; j < d.poles.size(); ++j) {
        acc += d.residues[j] / (y - d.poles[j]);
        acc += std::conj(d.residues[j]) / (y - std::conj(d.poles[j]));
    }
    return acc;
}

std::vector<cdouble> roots_of_char(const Rational& d, double t, cdouble x) {
    return poly_roots(char_poly(d, t, x).coeffs);
}

struct SplitRoots {
    std::vector<double> real_roots;
    std::vector<cdouble> upper;
    std::vector<cdouble> lower;
};

SplitRoots split_by_threshold(const std::vector<cdouble>& roots) {
    SplitRoots out;
    for (const auto& r : roots) {
        if (std::abs(r.imag()) <= 1e-9 * (1.0 + std::abs(r.real())))
            out.real_roots.push_back(r.real());
        else if (r.imag() > 0.0)
            out.upper.push_back(r);
        else
            out.lower.push_back(r);
    }
    std::sort(out.real_roots.begin(), out.real_roots.end());
    return out;
}

}  // namespace

CharPoly char_poly(const Rational& d, double t, cdouble x) {
    Poly q{1.0};
    for (const auto& p : d.poles) {
        q = poly_mul(q, Poly{-p, 1.0});
        q = poly_mul(q, Poly{-std::conj(p), 1.0});
    }
    Poly p_num(q.size() > 1 ? q.size() - 1 : 1, 0.0);
    for (std::size_t j = 0; j < d.poles.size(); ++j) {
        const Poly qa = poly_deflate(q, d.poles[j]);
        const Poly qb = poly_deflate(q, std::conj(d.poles[j]));
        for (std::size_t i = 0; i < qa.size(); ++i) {
            p_num[i] += d.residues[j] * qa[i];
            p_num[i] += std::conj(d.residues[j]) * qb[i];
        }
    }
    Poly out = poly_mul(q, Poly{-x, 1.0});
    for (std::size_t i = 0; i < p_num.size(); ++i) out[i] += 2.0 * t * p_num[i];
    return CharPoly{out};
}

std::vector<cdouble> poly_roots(const std::vector<cdouble>& coeffs) {
    Poly a = coeffs;
    while (a.size() > 1 && std::abs(a.back()) == 0.0) a.pop_back();
    const int deg = static_cast<int>(a.size()) - 1;
    if (deg < 1) return {};
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
    for (int i = 0; i + 1 < deg; ++i) companion(i + 1, i) = 1.0;
    for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -a[i] / a.back();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    std::vector<cdouble> roots(deg);
    for (int i = 0; i < deg; ++i) {
        cdouble z = solver.eigenvalues()[i];
        for (int it = 0; it < 2; ++it) {
            const cdouble dp = poly_eval_deriv(a, z);
            if (std::abs(dp) > 0.0) z -= poly_eval(a, z) / dp;
        }
        roots[i] = z;
    }
    std::sort(roots.begin(), roots.end(), [](const cdouble& l, const cdouble& r) {
        return l.real() != r.real() ? l.real() < r.real() : l.imag() < r.imag();
    });
    return roots;
}

RootClassification classify_roots(const Rational& d, double t, double x) {
    const std::size_t n_poles = d.poles.size();
    RootClassification out;
    if (t == 0.0) {
        out.real_roots = {x};
        out.upper_roots = std::vector<cdouble>(d.poles.begin(), d.poles.end());
        out.all_roots.push_back(x);
        for (const auto& p : d.poles) {
            out.all_roots.push_back(p);
            out.all_roots.push_back(std::conj(p));
        }
        out.selected.push_back(x);
        for (const auto& p : d.poles) out.selected.push_back(p);
        out.ell = 0;
        return out;
    }
    out.all_roots = roots_of_char(d, t, x);
    for (std::size_t i = 0; i < out.all_roots.size(); ++i)
        for (std::size_t j = i + 1; j < out.all_roots.size(); ++j)
            if (std::abs(out.all_roots[i] - out.all_roots[j]) <
                1e-8 * (1.0 + std::abs(out.all_roots[i])))
                throw CausticHit("repeated characteristic root at x=" + std::to_string(x));
    SplitRoots sp = split_by_threshold(out.all_roots);
    const bool consistent = sp.real_roots.size() % 2 == 1 &&
                            sp.upper.size() == sp.lower.size() &&
                            sp.real_roots.size() + 2 * sp.upper.size() == 2 * n_poles + 1;
    if (!consistent) {
        // borderline roots: re-solve slightly above the real axis and keep the
        // partners that moved up
        const std::vector<cdouble> shifted = roots_of_char(d, t, cdouble(x, 1e-6));
        sp = SplitRoots{};
        for (const auto& r : out.all_roots) {
            std::size_t best = 0;
            double dist = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < shifted.size(); ++j) {
                const double dd = std::abs(shifted[j] - r);
                if (dd < dist) {
                    dist = dd;
                    best = j;
                }
            }
            if (std::abs(r.imag()) <= 1e-9 * (1.0 + std::abs(r.real())))
                sp.real_roots.push_back(r.real());
            else if (shifted[best].imag() > 0.0)
                sp.upper.push_back(r);
            else
                sp.lower.push_back(r);
        }
        std::sort(sp.real_roots.begin(), sp.real_roots.end());
        if (sp.real_roots.size() % 2 != 1)
            throw CausticHit("root classification degenerate at x=" + std::to_string(x));
    }
    out.real_roots = sp.real_roots;
    out.upper_roots = sp.upper;
    out.ell = static_cast<int>(sp.real_roots.size() - 1) / 2;
    for (std::size_t k = 0; k < sp.real_roots.size(); k += 2)
        out.selected.push_back(sp.real_roots[k]);
    for (const auto& r : sp.upper) out.selected.push_back(r);
    if (out.selected.size() != n_poles + 1)
        throw CausticHit("selected root count mismatch at x=" + std::to_string(x));
    return out;
}

cdouble lambda_direct(const Rational& d, double t, double x) {
    const RootClassification cls = classify_roots(d, t, x);
    cdouble acc = -x;
    for (const auto& z : cls.selected) acc += z;
    for (const auto& p : d.poles) acc -= p;
    return acc / (2.0 * t);
}

LambdaSystem lambda_system(const Rational& d, double t, double x) {
    const RootClassification cls = classify_roots(d, t, x);
    const int n = static_cast<int>(d.poles.size()) + 1;
    Eigen::MatrixXcd A(n, n);
    Eigen::VectorXcd rhs(n);
    for (int row = 0; row < n; ++row) {
        const cdouble z = cls.selected[static_cast<std::size_t>(row)];
        A(row, 0) = 1.0;
        for (int j = 1; j < n; ++j)
            A(row, j) = 1.0 / (z - d.poles[static_cast<std::size_t>(j - 1)]);
        rhs(row) = (z - x) / (2.0 * t);
    }
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(A);
    if (!lu.isInvertible())
        throw SolveFailure("collocation system singular at x=" + std::to_string(x),
                           lu.rcond());
    const Eigen::VectorXcd sol = lu.solve(rhs);
    LambdaSystem out;
    out.lambda = sol(0);
    for (int j = 1; j < n; ++j) out.mu.push_back(sol(j));
    out.residual = 0.0;
    for (const auto& z : cls.selected) {
        cdouble r = u0_complex(d, z) + out.lambda;
        for (int j = 1; j < n; ++j)
            r += sol(j) / (z - d.poles[static_cast<std::size_t>(j - 1)]);
        out.residual = std::max(out.residual, std::abs(r));
    }
    return out;
}

double zd_rational(const Rational& d, double t, double x) {
    if (t == 0.0) return u0_complex(d, x).real();
    return -2.0 * lambda_direct(d, t, x).real();
}

ZDField zd_grid_rational(const Rational& d, double t, const std::vector<double>& grid) {
    ZDField field;
    field.t = t;
    field.grid = grid;
    field.backend = "rational";
    field.values.resize(grid.size());
    field.ell.resize(grid.size());
    field.caustic.resize(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        double x = grid[i];
        for (int attempt = 0;; ++attempt) {
            try {
                const RootClassification cls = classify_roots(d, t, x);
                cdouble lam = -x;
                for (const auto& z : cls.selected) lam += z;
                for (const auto& p : d.poles) lam -= p;
                lam /= 2.0 * t;
                field.values[i] = t == 0.0 ? u0_complex(d, x).real() : -2.0 * lam.real();
                field.ell[i] = cls.ell;
                break;
            } catch (const CausticHit&) {
                if (attempt >= 5) throw;
                field.caustic[i] = 1;
                x += 1e-7 * (1.0 + std::abs(x));
            }
        }
    });
    return field;
}

cdouble cauchy_vandermonde_ratio(const std::vector<cdouble>& z, const std::vector<cdouble>& p) {
    if (z.size() != p.size() + 1)
        throw std::invalid_argument("cauchy_vandermonde_ratio: need |z| = |p| + 1");
    cdouble acc = 0.0;
    for (const auto& v : z) acc += v;
    for (const auto& v : p) acc -= v;
    return acc;
}

Rational split_poles(const Rational& d, double eps) {
    Rational out = d;
    for (std::size_t i = 0; i < out.poles.size(); ++i) {
        std::vector<std::size_t> group{i};
        for (std::size_t j = i + 1; j < out.poles.size(); ++j)
            if (std::abs(out.poles[i] - out.poles[j]) < 1e-9) group.push_back(j);
        if (group.size() < 2) continue;
        for (std::size_t k = 0; k < group.size(); ++k) {
            const double th = 2.0 * M_PI * static_cast<double>(k) /
                              static_cast<double>(group.size());
            cdouble shift(eps * std::cos(th), eps * std::sin(th));
            cdouble cand = out.poles[group[k]] + shift;
            if (cand.imag() <= 0.5 * out.poles[group[k]].imag())
                cand = out.poles[group[k]] + cdouble(eps * std::cos(th), eps);
            out.poles[group[k]] = cand;
        }
    }
    return out;
}

}  // namespace zd
