// Python bindings for the main operations: meshes, kernels, the pointwise
// operator, Galerkin assembly, solvers, ball kernels, and diagnostics.

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rfrac/diagnostics.hpp"
#include "rfrac/errors.hpp"
#include "rfrac/expr.hpp"
#include "rfrac/io.hpp"
#include "rfrac/representation.hpp"
#include "rfrac/solvers.hpp"
#include "rfrac/special.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace rfrac;

PYBIND11_MODULE(_rfrac, m) {
    m.doc() = "regional fractional Laplacian toolkit";

    py::register_exception<ToleranceError>(m, "ToleranceError", PyExc_RuntimeError);
    py::register_exception<SolvabilityError>(m, "SolvabilityError", PyExc_RuntimeError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

    py::class_<Interval>(m, "Interval")
        .def(py::init<double, double>(), "a"_a, "b"_a)
        .def_readonly("a", &Interval::a)
        .def_readonly("b", &Interval::b)
        .def("length", &Interval::length)
        .def("__repr__", [](const Interval& iv) {
            return "Interval(" + format_g17(iv.a) + ", " + format_g17(iv.b) + ")";
        });

    py::class_<Ball>(m, "Ball")
        .def(py::init<std::vector<double>, double>(), "center"_a, "radius"_a)
        .def_readonly("center", &Ball::center)
        .def_readonly("radius", &Ball::radius)
        .def_property_readonly("dim", &Ball::dim);

    py::class_<GradedMesh>(m, "GradedMesh")
        .def_readonly("domain", &GradedMesh::domain)
        .def_readonly("grading", &GradedMesh::grading)
        .def_readonly("nodes", &GradedMesh::nodes)
        .def_property_readonly("n", &GradedMesh::cell_count)
        .def("h_min", &GradedMesh::h_min)
        .def("h_max", &GradedMesh::h_max)
        .def("boundary_distance_at", &GradedMesh::boundary_distance_at, "j"_a);

    m.def("build_graded_mesh", &build_graded_mesh, "domain"_a, "n"_a, "grading"_a);
    m.def("default_grading", &default_grading, "s"_a);
    m.def(
        "boundary_distance",
        [](const Interval& dom, double x) { return boundary_distance(dom, x); },
        "domain"_a, "x"_a);
    m.def(
        "boundary_distance",
        [](const Ball& dom, const std::vector<double>& x) { return boundary_distance(dom, x); },
        "domain"_a, "x"_a);

    m.def("gamma_fn", &gamma_fn, "x"_a);
    m.def("sphere_area", &sphere_area, "dim"_a);
    m.def("ball_volume", &ball_volume, "dim"_a);
    m.def("kernel_constant", &kernel_constant, "dim"_a, "s"_a);
    m.def(
        "killing_potential",
        [](const Interval& dom, double s, double x) { return killing_potential(dom, s, x); },
        "domain"_a, "s"_a, "x"_a);
    m.def(
        "killing_potential",
        [](const Ball& dom, double s, const std::vector<double>& x, double tol) {
            return killing_potential(dom, s, x, tol);
        },
        "domain"_a, "s"_a, "x"_a, "tol"_a = 1e-10);
    m.def(
        "apply_pointwise",
        [](const Interval& dom, double s, const std::function<double(double)>& u, double x,
           double tol) {
            PointwiseOptions opt;
            opt.tol = tol;
            return apply_pointwise(dom, s, u, x, opt);
        },
        "domain"_a, "s"_a, "u"_a, "x"_a, "tol"_a = 1e-8,
        "Pointwise P.V. evaluation of the regional operator at an interior point.");

    py::class_<OperatorAssembly>(m, "OperatorAssembly")
        .def_property_readonly("mesh", &OperatorAssembly::mesh)
        .def_property_readonly("s", [](const OperatorAssembly& a) { return a.order().value(); })
        .def_property_readonly("interior_count", &OperatorAssembly::interior_count)
        .def("stiffness", &OperatorAssembly::stiffness_interior,
             "Interior stiffness matrix of the regional energy form.")
        .def("stiffness_full", &OperatorAssembly::stiffness_full)
        .def("mass", [](const OperatorAssembly& a) { return a.mass_interior().dense(); });

    m.def(
        "assemble", [](const GradedMesh& mesh, double s) { return assemble(mesh, s); }, "mesh"_a,
        "s"_a);

    py::class_<DiscreteField>(m, "DiscreteField")
        .def(py::init([](const GradedMesh& mesh, std::vector<double> values) {
                 if (static_cast<int>(values.size()) != mesh.node_count())
                     throw std::invalid_argument("DiscreteField: values size mismatch");
                 const bool zt = values.front() == 0.0 && values.back() == 0.0;
                 return DiscreteField{mesh, std::move(values), zt};
             }),
             "mesh"_a, "values"_a)
        .def_static("constant", &DiscreteField::constant, "mesh"_a, "value"_a)
        .def_static("from_function", &DiscreteField::from_function, "mesh"_a, "f"_a)
        .def_readonly("mesh", &DiscreteField::mesh)
        .def_readonly("values", &DiscreteField::values)
        .def_readonly("zero_trace", &DiscreteField::zero_trace)
        .def("__call__", &DiscreteField::operator(), "x"_a)
        .def("max_value", &DiscreteField::max_value)
        .def("min_interior", &DiscreteField::min_interior)
        .def("positive_part", &DiscreteField::positive_part)
        .def("negative_part", &DiscreteField::negative_part);

    py::class_<SolveReport>(m, "SolveReport")
        .def_readonly("residual_norm", &SolveReport::residual_norm)
        .def_readonly("iterations", &SolveReport::iterations)
        .def_property_readonly("solver", [](const SolveReport& r) {
            return r.solver == SolveReport::Solver::direct ? "direct" : "cg";
        });

    m.def(
        "solve_dirichlet",
        [](const OperatorAssembly& assembly, const DiscreteField& c, const DiscreteField& f,
           double tol) { return solve_dirichlet(assembly, c, f, tol); },
        "assembly"_a, "c"_a, "f"_a, "tol"_a = 1e-10);
    m.def("torsion", &torsion, "assembly"_a, "tol"_a = 1e-10);

    py::class_<EigenPair>(m, "EigenPair")
        .def_readonly("lambda1", &EigenPair::lambda1)
        .def_readonly("phi1", &EigenPair::phi1)
        .def_readonly("residual", &EigenPair::residual)
        .def_readonly("iterations", &EigenPair::iterations);

    m.def("principal_eigenpair", &principal_eigenpair, "assembly"_a, "tol"_a = 1e-10,
          "max_iter"_a = 500);
    m.def("energy_form", &energy_form, "assembly"_a, "u"_a, "v"_a);
    m.def("l2_inner", &l2_inner, "u"_a, "v"_a);
    m.def("l2_norm", &l2_norm, "u"_a);

    py::class_<BallKernels>(m, "BallKernels")
        .def(py::init<int, double, double>(), "dim"_a, "s"_a, "tol"_a = 1e-9)
        .def_property_readonly("dim", &BallKernels::dim)
        .def_property_readonly("s", &BallKernels::order)
        .def_property_readonly("k_green", &BallKernels::k_green)
        .def_property_readonly("gamma_poisson", &BallKernels::gamma_poisson)
        .def("green", &BallKernels::green, "r"_a)
        .def("poisson", &BallKernels::poisson, "r"_a)
        .def("green_mass", &BallKernels::green_mass)
        .def("poisson_mass", &BallKernels::poisson_mass)
        .def("green_mass_target", &BallKernels::green_mass_target);

    py::class_<MeanValueReport>(m, "MeanValueReport")
        .def_readonly("center", &MeanValueReport::center)
        .def_readonly("radius", &MeanValueReport::radius)
        .def_readonly("green_term", &MeanValueReport::green_term)
        .def_readonly("poisson_term", &MeanValueReport::poisson_term)
        .def_readonly("gap", &MeanValueReport::gap);

    m.def(
        "mean_value_gap",
        [](const BallKernels& kernels, const Interval& support,
           const std::function<double(double)>& u, const std::function<double(double)>& c_omega,
           double x, double r, double tol) {
            return mean_value_gap(kernels, support, u, c_omega, x, r, tol);
        },
        "kernels"_a, "support"_a, "u"_a, "c_omega"_a, "x"_a, "r"_a, "tol"_a = 1e-7);
    m.def(
        "mean_value_gap_with_density",
        [](const BallKernels& kernels, const Interval& support,
           const std::function<double(double)>& u, const std::function<double(double)>& density,
           double x, double r, double tol) {
            return mean_value_gap_with_density(kernels, support, u, density, x, r, tol);
        },
        "kernels"_a, "support"_a, "u"_a, "green_density"_a, "x"_a, "r"_a, "tol"_a = 1e-7);

    py::class_<GriddedFunction>(m, "GriddedFunction")
        .def(py::init([](double a, double b, std::vector<double> values) {
                 GriddedFunction g;
                 g.a = a;
                 g.b = b;
                 g.values = std::move(values);
                 if (g.count() < 2)
                     throw std::invalid_argument("GriddedFunction: need at least 2 samples");
                 return g;
             }),
             "a"_a, "b"_a, "values"_a)
        .def_static("sample", &GriddedFunction::sample, "a"_a, "b"_a, "count"_a, "f"_a)
        .def_readonly("a", &GriddedFunction::a)
        .def_readonly("b", &GriddedFunction::b)
        .def_readonly("values", &GriddedFunction::values)
        .def("__call__", &GriddedFunction::operator(), "x"_a);

    m.def("mollify", &mollify, "f"_a, "eps"_a);
    m.def("maximal_function", &maximal_function, "f"_a, "x"_a, "radii"_a);

    py::class_<ExponentFit>(m, "ExponentFit")
        .def_readonly("exponent", &ExponentFit::exponent)
        .def_readonly("residual", &ExponentFit::residual)
        .def_readonly("nodes_used", &ExponentFit::nodes_used);

    py::class_<HopfReport>(m, "HopfReport")
        .def_readonly("s", &HopfReport::s)
        .def_readonly("fitted_exponent", &HopfReport::fitted_exponent)
        .def_readonly("epsilon0", &HopfReport::epsilon0)
        .def_readonly("layer_width", &HopfReport::layer_width)
        .def_readonly("fit_residual", &HopfReport::fit_residual)
        .def_readonly("n", &HopfReport::n)
        .def_readonly("passed", &HopfReport::pass)
        .def_readonly("verdict", &HopfReport::verdict)
        .def("__repr__", [](const HopfReport& r) {
            return "HopfReport(epsilon0=" + format_g17(r.epsilon0) +
                   ", exponent=" + format_g17(r.fitted_exponent) + ", verdict='" + r.verdict +
                   "')";
        });

    py::class_<BoundsReport>(m, "BoundsReport")
        .def_readonly("c_lower", &BoundsReport::c_lower)
        .def_readonly("c_upper", &BoundsReport::c_upper)
        .def_readonly("passed", &BoundsReport::pass)
        .def_readonly("verdict", &BoundsReport::verdict);

    py::class_<CompactMin>(m, "CompactMin")
        .def_readonly("compact", &CompactMin::compact)
        .def_readonly("min_value", &CompactMin::min_value);

    py::class_<SmpReport>(m, "SmpReport")
        .def_readonly("minima", &SmpReport::minima)
        .def_readonly("passed", &SmpReport::pass)
        .def_readonly("verdict", &SmpReport::verdict);

    py::class_<NodeVerdict>(m, "NodeVerdict")
        .def_readonly("node", &NodeVerdict::node)
        .def_readonly("x", &NodeVerdict::x)
        .def_readonly("operator_value", &NodeVerdict::operator_value)
        .def_readonly("rhs", &NodeVerdict::rhs)
        .def_readonly("passed", &NodeVerdict::pass);

    m.def("boundary_exponent", &boundary_exponent, "u"_a, "layer"_a);
    m.def("hopf_ratio", &hopf_ratio, "u"_a, "s"_a, "layer"_a);
    m.def("torsion_bounds", &torsion_bounds, "u_tor"_a, "s"_a);
    m.def("smp_probe", &smp_probe, "u"_a, "compacts"_a);
    m.def("default_compacts", &default_compacts, "domain"_a);
    m.def("supersolution_check", &supersolution_check, "u"_a, "c"_a, "s"_a, "tol"_a,
          "stride"_a = 1, "quad_tol"_a = 1e-7);

    m.def(
        "eval_expression",
        [](const std::string& src, double x) { return Expression::parse(src).eval(x); },
        "expr"_a, "x"_a, "Evaluate the CLI expression grammar at a point.");
}
