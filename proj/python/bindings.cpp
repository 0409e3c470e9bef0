#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "psido/functionals.hpp"
#include "psido/harness.hpp"
#include "psido/quantize.hpp"
#include "psido/schatten.hpp"

namespace py = pybind11;
using namespace psido;

namespace {

Grid grid_from(int d, double L, int n) { return Grid(d, L, n); }

std::vector<double> svals(const Eigen::MatrixXcd& M) { return singular_values(M).values; }

py::dict qnorm_dict(const QNorm& r) {
    py::dict d;
    d["value"] = r.value;
    d["tail_qmass"] = r.tail_qmass;
    d["kept"] = r.kept;
    d["zero"] = r.zero;
    return d;
}

py::dict inequality_dict(const InequalityReport& r) {
    py::dict d;
    d["lhs"] = r.lhs;
    d["rhs"] = r.rhs;
    d["margin"] = r.margin;
    d["holds"] = r.holds;
    return d;
}

std::string run_json(const std::string& config, std::optional<int> workers, std::optional<std::uint64_t> seed) {
    RunOptions o;
    o.workers = workers;
    o.seed = seed;
    py::gil_scoped_release release;
    return to_json(run_experiment(parse_config(json::parse(config)), o)).dump();
}

}  // namespace

PYBIND11_MODULE(_psido, m) {
    m.doc() = "Schatten quasi-norm experiments for pseudo-differential operators";

    py::register_exception<Error>(m, "PsidoError", PyExc_RuntimeError);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);

    py::class_<SymbolSpec>(m, "Symbol")
        .def_readonly("d", &SymbolSpec::d)
        .def_readonly("label", &SymbolSpec::label)
        .def("__call__", [](const SymbolSpec& a, double w, double xi) { return a.eval({w, 0.0}, {xi, 0.0}); });

    m.def("builtin_symbol", &builtin_symbol, py::arg("name"), py::arg("params") = Params{});
    m.def("symbol_families", &builtin_family_names);
    m.def("domain_fixtures", &domain_fixture_names);
    m.def("experiment_kinds", &experiment_kinds);

    m.def("smoothness_orders", [](int d, double q) {
        const auto o = smoothness_orders(d, q);
        return py::make_tuple(o.n, o.m);
    });
    m.def("t_matrix", [](double t) {
        const auto T = t_to_matrix(t);
        return std::array<double, 4>{T.t11(), T.t12(), T.t21(), T.t22()};
    });

    m.def(
        "assemble_t_quant",
        [](const SymbolSpec& a, double t, double alpha, int d, double L, int n) {
            return assemble_t_quant(a, t, alpha, grid_from(d, L, n)).entries;
        },
        py::arg("symbol"), py::arg("t"), py::arg("alpha"), py::arg("d") = 1, py::arg("L") = 2.0, py::arg("n") = 128);
    m.def(
        "assemble_interval_projection",
        [](double lo, double hi, double alpha, double L, int n) {
            return assemble_multiplier(XiSymbol::indicator(XiRegion::interval(lo, hi)), alpha, grid_from(1, L, n)).entries;
        },
        py::arg("lo"), py::arg("hi"), py::arg("alpha"), py::arg("L") = 2.0, py::arg("n") = 128);
    m.def("grid_points", [](int d, double L, int n) {
        const Grid g = grid_from(d, L, n);
        std::vector<std::array<double, 2>> p;
        for (Index i = 0; i < g.size(); ++i) p.push_back(g.point(i));
        return p;
    });

    m.def("singular_values", &svals, py::arg("matrix"));
    m.def(
        "qnorm",
        [](const std::vector<double>& s, double q, double tail_cut) { return qnorm_dict(qnorm(SingularSpectrum{s, ""}, q, tail_cut)); },
        py::arg("singular_values"), py::arg("q"), py::arg("tail_cut") = kDefaultTailCut);
    m.def(
        "schatten_norm", [](const Eigen::MatrixXcd& M, double q, double tail_cut) { return schatten_norm(M, q, tail_cut); },
        py::arg("matrix"), py::arg("q"), py::arg("tail_cut") = 0.0);
    m.def("check_triangle", [](const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B, double q) {
        return inequality_dict(check_triangle(A, B, q));
    });
    m.def("check_holder", [](const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B, double q1, double q2) {
        return inequality_dict(check_holder(A, B, q1, q2));
    });

    m.def(
        "lattice_qnorm",
        [](const std::function<double(double)>& h, double r, double delta, double truncation_radius, int cube_points) {
            LatticeNormParams p;
            p.r = r;
            p.delta = delta;
            p.truncation_radius = truncation_radius;
            p.cube_points = cube_points;
            return lattice_qnorm([&](const double* x) { return h(x[0]); }, 1, p).value;
        },
        py::arg("h"), py::arg("r"), py::arg("delta"), py::arg("truncation_radius") = 8.0, py::arg("cube_points") = 16);

    m.def(
        "fit_loglog_slope",
        [](const std::vector<std::pair<double, double>>& pts) {
            const Fit f = fit_loglog_slope(pts);
            return py::make_tuple(f.slope, f.stderr_, f.intercept);
        },
        py::arg("points"));

    m.def("_validate_config", [](const std::string& s) { return validate_config(json::parse(s)); });
    m.def("_run", &run_json, py::arg("config"), py::arg("workers") = std::nullopt, py::arg("seed") = std::nullopt);
    m.def("_verdict", [](const std::string& s) { return compute_verdict(report_from_json(json::parse(s))); });
    m.def("_table", [](const std::string& s) { return report_table(report_from_json(json::parse(s))); });
    m.def("_csv", [](const std::string& s) { return report_csv(report_from_json(json::parse(s))); });
}
