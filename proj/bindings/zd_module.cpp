// Python bindings for the core operations.
#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zd/bo_eps.hpp"
#include "zd/characteristics.hpp"
#include "zd/closedforms.hpp"
#include "zd/datum.hpp"
#include "zd/hardy.hpp"
#include "zd/rational.hpp"

namespace py = pybind11;

namespace {

py::dict field_to_dict(const zd::ZDField& f) {
    py::dict out;
    out["t"] = f.t;
    out["x"] = f.grid;
    out["values"] = f.values;
    out["ell"] = f.ell;
    out["caustic"] = f.caustic;
    out["backend"] = f.backend;
    return out;
}

py::dict caustics_to_dict(const zd::CausticSet& ks) {
    py::dict out;
    out["t"] = ks.t;
    out["values"] = ks.values;
    py::list comps;
    for (const zd::CausticComponent& c : ks.components) {
        py::dict obj;
        obj["lo"] = std::isfinite(c.lo) ? py::cast(c.lo) : py::none();
        obj["hi"] = std::isfinite(c.hi) ? py::cast(c.hi) : py::none();
        obj["ell"] = c.ell;
        comps.append(obj);
    }
    out["components"] = comps;
    return out;
}

const zd::Rational& as_rational(const zd::InitialDatum& d) {
    const zd::Rational* ra = d.get_if<zd::Rational>();
    if (ra == nullptr) throw py::value_error("datum is not rational");
    return *ra;
}

}  // namespace

PYBIND11_MODULE(_zdcore, m) {
    m.doc() = "zero-dispersion profiles of the Benjamin-Ono equation";

    py::class_<zd::InitialDatum>(m, "Datum")
        .def_static("from_json", &zd::datum_from_json, py::arg("text"))
        .def_static("step", &zd::InitialDatum::make_step, py::arg("left"),
                    py::arg("right"), py::arg("height"))
        .def_static("rational", &zd::InitialDatum::make_rational, py::arg("poles"),
                    py::arg("residues"))
        .def_static("piecewise_linear", &zd::InitialDatum::make_piecewise_linear,
                    py::arg("breakpoints"), py::arg("values"))
        .def_static("zero", &zd::InitialDatum::zero)
        .def("to_json", &zd::datum_to_json)
        .def("__call__",
             [](const zd::InitialDatum& d, py::array_t<double> y) {
                 auto in = y.unchecked<1>();
                 py::array_t<double> out(in.shape(0));
                 auto w = out.mutable_unchecked<1>();
                 for (py::ssize_t i = 0; i < in.shape(0); ++i) w(i) = d.eval(in(i));
                 return out;
             })
        .def("eval", &zd::InitialDatum::eval, py::arg("y"))
        .def("eval_deriv", &zd::InitialDatum::eval_deriv, py::arg("y"))
        .def("norms",
             [](const zd::InitialDatum& d) {
                 const zd::Norms n = d.norms();
                 return py::make_tuple(n.l2, n.linf);
             })
        .def("mollify", &zd::mollify, py::arg("delta"))
        .def("sup_bound", &zd::InitialDatum::sup_bound)
        .def("support_radius", &zd::InitialDatum::support_radius);

    m.def(
        "zd_grid",
        [](const zd::InitialDatum& d, double t, const std::vector<double>& grid) {
            return field_to_dict(zd::zd_grid(d, t, grid));
        },
        py::arg("datum"), py::arg("t"), py::arg("grid"),
        "profile via multivalued characteristics");
    m.def("zd_pointwise", &zd::zd_pointwise, py::arg("datum"), py::arg("t"),
          py::arg("x"));
    m.def(
        "zd_rational",
        [](const zd::InitialDatum& d, double t, double x) {
            return zd::zd_rational(as_rational(d), t, x);
        },
        py::arg("datum"), py::arg("t"), py::arg("x"),
        "profile via the polynomial root route for rational data");
    m.def(
        "critical_values",
        [](const zd::InitialDatum& d, double t) {
            return caustics_to_dict(zd::critical_values(d, t));
        },
        py::arg("datum"), py::arg("t"));
    m.def("zd_step", &zd::zd_step, py::arg("t"), py::arg("x"),
          "closed-form profile of the unit step on ]-1,1[");
    m.def(
        "semigroup_gap",
        [](double s) {
            const zd::SemigroupGap g = zd::semigroup_gap(s);
            return py::make_tuple(g.x_witness, g.gap);
        },
        py::arg("s"), "witness abscissa and size of the semigroup violation");
    m.def(
        "boundary_trace",
        [](const zd::InitialDatum& d, double t, const std::vector<double>& grid,
           double sigma, int m) {
            return field_to_dict(zd::boundary_trace(d, t, grid, sigma, m));
        },
        py::arg("datum"), py::arg("t"), py::arg("grid"), py::arg("sigma"),
        py::arg("m") = 512, "Poisson-smoothed profile from the Hardy-space solve");
    m.def(
        "pi_u",
        [](const zd::InitialDatum& d, double t, std::complex<double> x, int m) {
            return zd::pi_u(d, t, x, m);
        },
        py::arg("datum"), py::arg("t"), py::arg("x"), py::arg("m") = 512);
    m.def(
        "eps_run",
        [](const zd::InitialDatum& d, double epsilon, double t_final, int modes,
           double half_length) {
            zd::EpsRunConfig cfg;
            cfg.datum = d;
            cfg.epsilon = epsilon;
            cfg.t_final = t_final;
            cfg.modes = modes;
            cfg.half_length = half_length;
            const zd::EpsSolution sol = zd::run(cfg);
            py::dict out;
            out["x"] = sol.xgrid;
            out["u"] = sol.snapshots.back();
            out["times"] = sol.times;
            py::list cons;
            for (const zd::ConservedSample& c : sol.conserved)
                cons.append(py::make_tuple(c.time, c.l2, c.mean));
            out["conserved"] = cons;
            return out;
        },
        py::arg("datum"), py::arg("epsilon"), py::arg("t_final"),
        py::arg("modes") = 4096, py::arg("half_length") = 20.0,
        "small-dispersion run on the periodic surrogate");
}
