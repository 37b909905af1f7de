#include "torifano/cli.hpp"
#include "torifano/errors.hpp"
#include "torifano/ma_solver.hpp"
#include "torifano/moments.hpp"
#include "torifano/polytope.hpp"
#include "torifano/problem.hpp"
#include "torifano/stability.hpp"
#include "torifano/triangulation.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace torifano;
using nlohmann::json;

namespace {

// JSON crosses the boundary as text; the Python side decodes it.
ProblemDocument document_from(const std::string& text) { return problem_from_json(json::parse(text)); }

std::vector<std::string> strings(const QVector& v) {
    std::vector<std::string> out;
    for (const auto& q : v) out.push_back(to_string(q));
    return out;
}

Polytope polytope_from_strings(const std::vector<std::pair<std::vector<std::string>, std::string>>& hs, int dimension) {
    std::vector<Halfspace> list;
    for (const auto& [normal, offset] : hs) {
        QVector n;
        for (const auto& s : normal) n.push_back(parse_rational(s));
        list.push_back({n, parse_rational(offset)});
    }
    return polytope_from_halfspaces(std::move(list), dimension);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact toric polytope moments, coupled Kahler-Einstein criteria and a 1-D Monge-Ampere solver";
    m.attr("__version__") = kVersion;

    auto base = py::register_exception<Error>(m, "TorifanoError", PyExc_RuntimeError);
    py::register_exception<InputError>(m, "InputError", base.ptr());
    py::register_exception<DegenerateError>(m, "DegenerateError", base.ptr());
    py::register_exception<EmptyPolytopeError>(m, "EmptyPolytopeError", base.ptr());
    py::register_exception<UnboundedPolytopeError>(m, "UnboundedPolytopeError", base.ptr());
    py::register_exception<RangeError>(m, "RangeError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<DomainMismatchError>(m, "DomainMismatchError", base.ptr());
    py::register_exception<DegenerateLiftError>(m, "DegenerateLiftError", base.ptr());
    py::register_exception<SingularHessianError>(m, "SingularHessianError", base.ptr());
    py::register_exception<UnknownExampleError>(m, "UnknownExampleError", base.ptr());

    m.def("builtin_names", &builtin_names);
    m.def("command_names", &command_names);
    m.def("builtin_example_json", [](const std::string& name) { return problem_to_json(builtin_example(name)).dump(); });
    m.def("normalize_problem_json", [](const std::string& text) { return problem_to_json(document_from(text)).dump(); });
    m.def("run_json", [](const std::string& command, const std::string& text) {
        const auto out = run_command(command, document_from(text));
        std::vector<std::string> snaps;
        for (const auto& s : out.snapshots) snaps.push_back(s.dump());
        return py::make_tuple(out.report.dump(), out.exit_code, snaps);
    });

    m.def(
        "polytope",
        [](const std::vector<std::pair<std::vector<std::string>, std::string>>& halfspaces, int dimension) {
            const auto p = polytope_from_strings(halfspaces, dimension);
            std::vector<std::vector<std::string>> vertices;
            for (const auto& v : p.vertices) vertices.push_back(strings(v));
            const auto mesh = triangulate(p);
            py::dict d;
            d["vertices"] = vertices;
            d["redundant"] = p.redundant;
            d["volume"] = to_string(volume(mesh));
            d["barycenter"] = strings(barycenter(mesh));
            return d;
        },
        py::arg("halfspaces"), py::arg("dimension"),
        "Halfspaces are (normal, offset) pairs of rational strings meaning <normal, x> >= -offset.");

    m.def(
        "weighted_moments",
        [](const std::vector<std::pair<std::vector<std::string>, std::string>>& halfspaces, int dimension,
           const Eigen::VectorXd& v) {
            const auto w = weighted_moments(triangulate(polytope_from_strings(halfspaces, dimension)), v, 2);
            py::dict d;
            d["log_volume"] = w.log_volume;
            d["volume"] = w.volume;
            d["barycenter"] = w.barycenter;
            d["covariance"] = w.covariance;
            d["err_estimate"] = w.err_estimate;
            return d;
        },
        py::arg("halfspaces"), py::arg("dimension"), py::arg("v"));

    m.def(
        "solve_ma_1d",
        [](const std::vector<std::pair<double, double>>& intervals, const std::vector<double>& v, double R, double h) {
            MAProblem p;
            for (const auto& [lo, hi] : intervals) p.parts.push_back({lo, hi});
            p.v = v;
            p.grid = {R, h};
            const auto r = solve_continuity_1d(p);
            py::dict d;
            d["status"] = r.status == MAStatus::Converged ? "Converged" : "Obstructed";
            d["reason"] = r.reason;
            d["t_reached"] = r.t_reached;
            d["x"] = r.state.x;
            d["f"] = r.state.f;
            d["soliton_residual"] = r.soliton_residual;
            d["obstruction_residual"] = r.obstruction_residual;
            d["mass"] = r.state.mass;
            return d;
        },
        py::arg("intervals"), py::arg("v"), py::arg("R") = 8.0, py::arg("h") = 0.004);
}
