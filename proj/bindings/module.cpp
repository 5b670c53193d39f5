// Python bindings for the gasket solver. The surface mirrors what the CLI
// offers: build a graph level, evaluate the quadratic form, run the
// constructive constants, and drive the full three-solution pipeline.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sgsolver/energy.hpp"
#include "sgsolver/gasket.hpp"
#include "sgsolver/nonlinearity.hpp"
#include "sgsolver/functional.hpp"
#include "sgsolver/pipeline.hpp"
#include "sgsolver/thresholds.hpp"

namespace py = pybind11;
using namespace sg;

namespace {

// Thin handle so python holds the immutable level by shared_ptr.
struct PyGasket {
    std::shared_ptr<const GasketLevel> g;

    const GasketLevel& ref() const {
        if (!g) throw std::runtime_error("empty gasket handle");
        return *g;
    }
};

DiscreteFunction make_function(const PyGasket& pg, std::vector<double> values,
                               bool zero_boundary) {
    return DiscreteFunction(pg.g, std::move(values), zero_boundary);
}

ProblemSpec spec_from_args(int points, int level, double r, double s, double q,
                           double lambda, double eta) {
    ProblemSpec spec;
    spec.points = points;
    spec.level = level;
    spec.r = r;
    spec.s = s;
    spec.q = q;
    spec.lambda = lambda;
    spec.eta = eta;
    return spec;
}

py::dict solution_dict(const SolutionReport& rep) {
    py::dict d;
    d["kind"] = rep.kind;
    d["energy"] = rep.energy_value;
    d["residual"] = rep.residual;
    d["converged"] = rep.converged;
    d["constrained"] = rep.constrained;
    d["iterations"] = rep.iterations;
    d["note"] = rep.note;
    d["values"] = rep.u.values();
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "variational solver on Sierpinski gasket graph levels";

    py::class_<PyGasket>(m, "Gasket")
        .def_property_readonly("points", [](const PyGasket& p) { return p.ref().points; })
        .def_property_readonly("level", [](const PyGasket& p) { return p.ref().level; })
        .def_property_readonly("vertex_count",
                               [](const PyGasket& p) { return p.ref().vertex_count(); })
        .def_property_readonly("edge_count",
                               [](const PyGasket& p) { return p.ref().edge_count(); })
        .def_property_readonly("cell_count",
                               [](const PyGasket& p) { return p.ref().cell_count(); })
        .def_property_readonly("interior_count",
                               [](const PyGasket& p) { return p.ref().interior_count(); })
        .def_property_readonly("energy_scale",
                               [](const PyGasket& p) { return p.ref().energy_scale; })
        .def_property_readonly("weights", [](const PyGasket& p) { return p.ref().weights; })
        .def_property_readonly("edges",
                               [](const PyGasket& p) {
                                   std::vector<std::pair<int, int>> out;
                                   out.reserve(p.ref().edges.size());
                                   for (const auto& e : p.ref().edges)
                                       out.emplace_back(e[0], e[1]);
                                   return out;
                               })
        .def("is_boundary", [](const PyGasket& p, int v) { return p.ref().is_boundary(v); })
        .def("vertex", [](const PyGasket& p, int v) {
            auto span = p.ref().coord(v);
            return std::vector<long long>(span.begin(), span.end());
        })
        .def("cartesian", [](const PyGasket& p, int v) { return p.ref().cartesian(v); })
        .def("__repr__", [](const PyGasket& p) {
            return "<Gasket N=" + std::to_string(p.ref().points) +
                   " m=" + std::to_string(p.ref().level) +
                   " vertices=" + std::to_string(p.ref().vertex_count()) + ">";
        });

    m.def("build_gasket",
          [](int points, int level) { return PyGasket{build_level(points, level)}; },
          py::arg("points") = 3, py::arg("level") = 4);

    m.def("hausdorff_dimension", &hausdorff_dimension, py::arg("points"));

    m.def("energy",
          [](const PyGasket& g, const std::vector<double>& values, bool zero_boundary) {
              return energy(make_function(g, values, zero_boundary));
          },
          py::arg("gasket"), py::arg("values"), py::arg("zero_boundary") = false,
          "renormalized graph energy of a vertex function");

    m.def("inner",
          [](const PyGasket& g, const std::vector<double>& a, const std::vector<double>& b) {
              return inner(make_function(g, a, false), make_function(g, b, false));
          },
          py::arg("gasket"), py::arg("u"), py::arg("v"));

    m.def("harmonic_extension",
          [](const PyGasket& g, const std::vector<double>& values, bool zero_boundary) {
              auto fine = build_level(g.ref().points, g.ref().level + 1);
              auto ext = harmonic_extension(make_function(g, values, zero_boundary), fine);
              return py::make_tuple(PyGasket{fine}, ext.values());
          },
          py::arg("gasket"), py::arg("values"), py::arg("zero_boundary") = false,
          "minimal-energy extension to the next level; returns (fine_gasket, values)");

    m.def("compute_constants",
          [](int points, double q, double s) {
              auto c = compute_constants(points, q, s);
              py::dict d;
              d["c"] = c.c;
              d["R"] = c.R;
              d["barrier"] = c.barrier;
              d["Lambda"] = c.Lambda;
              return d;
          },
          py::arg("points") = 3, py::arg("q") = 4.0, py::arg("s") = 1.8);

    m.def("eval_I",
          [](const PyGasket& g, const std::vector<double>& values, double r, double s,
             double q, double lambda, double eta) {
              auto spec = spec_from_args(g.ref().points, g.ref().level, r, s, q, lambda, eta);
              spec.validate();
              FunctionalContext ctx(g.g, power_problem(spec));
              return ctx.value(make_function(g, values, true));
          },
          py::arg("gasket"), py::arg("values"), py::arg("r") = 1.5, py::arg("s") = 1.8,
          py::arg("q") = 4.0, py::arg("lambda") = 0.0, py::arg("eta") = 0.0,
          "energy functional of the power-family problem at a zero-boundary function");

    m.def("three_solutions",
          [](int points, int level, double r, double s, double q, py::object lambda,
             py::object eta, int path_points, double tol_residual, double tol_residual_rel) {
              PipelineOptions opt;
              opt.path_points = path_points;
              opt.solver.tol_residual = tol_residual;
              opt.solver.tol_residual_rel = tol_residual_rel;
              ProblemSpec spec = spec_from_args(points, level, r, s, q, 0.0, 0.0);
              opt.auto_lambda = lambda.is_none() || py::isinstance<py::str>(lambda);
              if (!opt.auto_lambda) spec.lambda = lambda.cast<double>();
              opt.auto_eta = eta.is_none() || py::isinstance<py::str>(eta);
              if (!opt.auto_eta) spec.eta = eta.cast<double>();

              auto res = three_solutions(spec, opt);
              py::dict d;
              d["status"] = res.status;
              d["detail"] = res.detail;
              d["in_regime"] = res.in_regime;
              d["lambda"] = res.spec.lambda;
              d["eta"] = res.spec.eta;
              d["doublings"] = res.doublings;
              py::dict th;
              th["c"] = res.thresholds.constants.c;
              th["R"] = res.thresholds.constants.R;
              th["barrier"] = res.thresholds.constants.barrier;
              th["Lambda"] = res.thresholds.constants.Lambda;
              th["eta_lambda"] = res.thresholds.etas.eta;
              d["thresholds"] = th;
              py::dict ord;
              ord["u1_negative"] = res.ordering.u1_negative;
              ord["u2_nonnegative"] = res.ordering.u2_nonnegative;
              ord["u2_below_barrier"] = res.ordering.u2_below_barrier;
              ord["u3_above_barrier"] = res.ordering.u3_above_barrier;
              d["ordering"] = ord;
              py::list sols;
              for (const auto& rep : res.solutions) sols.append(solution_dict(rep));
              d["solutions"] = sols;
              return d;
          },
          py::arg("points") = 3, py::arg("level") = 4, py::arg("r") = 1.5,
          py::arg("s") = 1.8, py::arg("q") = 4.0, py::arg("lambda") = py::none(),
          py::arg("eta") = py::none(), py::arg("path_points") = 33,
          py::arg("tol_residual") = 1e-8, py::arg("tol_residual_rel") = 1e-8,
          "run the full pipeline; lambda/eta default to automatic in-regime choices");
}
