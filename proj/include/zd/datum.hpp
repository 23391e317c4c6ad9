#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace zd {

struct Norms {
    double l2;
    double linf;
};

// Compactly supported C^1 profile given by nodes, values and derivatives;
// evaluated by cubic Hermite interpolation, zero beyond decay_bound.
struct SampledC1 {
    std::vector<double> nodes;
    std::vector<double> values;
    std::vector<double> derivs;
    double decay_bound;
};

// Real-valued rational profile sum_j c_j/(y-p_j) + conj mirror, Im p_j > 0.
struct Rational {
    std::vector<std::complex<double>> poles;
    std::vector<std::complex<double>> residues;
};

// Indicator of ]left,right[ scaled by height.
struct Step {
    double left;
    double right;
    double height;
};

// Continuous piecewise-linear profile; first and last values must vanish
// (compact support), zero outside the breakpoint span.
struct PiecewiseLinear {
    std::vector<double> breakpoints;
    std::vector<double> values;
};

class InitialDatum;

// Convolution of a base profile with the bump kernel of width delta.
// A mollified Step is evaluated by its explicit quintic ramp profile.
struct Mollified {
    std::shared_ptr<const InitialDatum> base;
    double delta;
};

class InitialDatum {
  public:
    using Variant = std::variant<SampledC1, Rational, Step, PiecewiseLinear, Mollified>;

    explicit InitialDatum(Variant v);

    static InitialDatum make_step(double left, double right, double height);
    static InitialDatum make_rational(std::vector<std::complex<double>> poles,
                                      std::vector<std::complex<double>> residues);
    static InitialDatum make_piecewise_linear(std::vector<double> breakpoints,
                                              std::vector<double> values);
    static InitialDatum make_sampled(std::vector<double> nodes, std::vector<double> values,
                                     std::vector<double> derivs, double decay_bound);
    static InitialDatum zero();

    double eval(double y) const;
    // Throws std::invalid_argument where the variant has no derivative
    // (Step at a jump, PiecewiseLinear at a breakpoint).
    double eval_deriv(double y) const;
    Norms norms() const;

    const Variant& variant() const { return v_; }
    template <class T>
    const T* get_if() const { return std::get_if<T>(&v_); }

    // True for variants admissible in the characteristic backend (everything
    // except the raw Step).
    bool is_c1() const;
    bool is_zero() const;

    // Rigorous upper bounds used for scan radii and pitches.
    double sup_bound() const;
    double deriv_sup_bound() const;
    // Radius beyond which the profile is identically zero (+inf for Rational).
    double support_radius() const;
    // Smallest feature length; drives scan pitches.
    double feature_scale() const;
    // Radius beyond which |2t u0'(y)| <= 1/2, so y + 2t u0(y) is increasing.
    double critical_scan_radius(double t) const;
    // Abscissae where the profile or its derivative is non-smooth.
    std::vector<double> singular_points() const;

  private:
    Variant v_;
};

// Convolution with the normalized C^2 bump kernel (35/32)(1-s^2)^3 scaled to
// width delta; a Step base gets the explicit quintic ramp profile, the zero
// datum is returned unchanged.
InitialDatum mollify(const InitialDatum& d, double delta);

// Pointwise scaling factor*u0 within the same variant family.
InitialDatum scaled(const InitialDatum& d, double factor);

// Sample a callable pair (f, f') onto a uniform grid.
InitialDatum sampled_from(const std::function<double(double)>& f,
                          const std::function<double(double)>& df, double lo, double hi,
                          int n, double decay_bound);

// JSON descriptor round trip. Descriptors use a "type" tag: step, rational
// (complex numbers as [re,im] pairs), sampled, piecewise_linear, mollified,
// zero.
InitialDatum datum_from_json(const std::string& text);
std::string datum_to_json(const InitialDatum& d);

// Quintic smoothstep ramp used by mollified steps.
double smoothstep_ramp(double s);
double smoothstep_ramp_deriv(double s);

}  // namespace zd
