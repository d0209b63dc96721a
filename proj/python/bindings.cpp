#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bundlesym/scenario.hpp"

namespace py = pybind11;
using namespace bundlesym;

namespace {

GroupPtr group(const std::string& name) { return GroupDescriptor::from_name(name); }

py::object to_python(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Gauge automorphisms, generalized canonical forms and G-invariant dynamics on T*P";

    // Messages start with the error code, e.g. "NotFixedPoint: ...".
    py::register_exception<Error>(m, "BundlesymError", PyExc_RuntimeError);

    m.def("group_dim", [](const std::string& g) { return group(g)->dim(); }, py::arg("group"));
    m.def("structure_constant", [](const std::string& g, int k, int i, int j) {
        return group(g)->structure_constant(k, i, j);
    }, py::arg("group"), py::arg("k"), py::arg("i"), py::arg("j"));
    m.def("exp", [](const std::string& g, const Vec& x) { return CMat(exp(group(g), {x}).matrix()); },
          py::arg("group"), py::arg("coords"), "Group element exp(sum x_i E_i) as a matrix.");
    m.def("log", [](const std::string& g, const CMat& mat) { return Vec(log(GroupElement(group(g), mat)).coords); },
          py::arg("group"), py::arg("matrix"), "Principal logarithm in algebra coordinates.");
    m.def("bracket", [](const std::string& g, const Vec& x, const Vec& y) {
        return Vec(bracket(group(g), {x}, {y}).coords);
    }, py::arg("group"), py::arg("x"), py::arg("y"));
    m.def("adjoint_matrix", [](const std::string& g, const CMat& mat) { return Mat(adjoint_matrix(GroupElement(group(g), mat))); },
          py::arg("group"), py::arg("matrix"));

    m.def("suite_names", &suite_names);
    m.def("check", [](const std::string& path, const std::string& suite, std::optional<std::uint64_t> seed) {
        const Scenario s = Scenario::load(path);
        CheckReport r;
        {
            py::gil_scoped_release release;
            r = run_check(s, suite, seed);
        }
        return to_python(r.to_json());
    }, py::arg("scenario"), py::arg("suite"), py::arg("seed") = py::none(),
       "Runs a property suite and returns the report as a dict.");
    m.def("simulate", [](const std::string& path, const std::string& run, const std::string& out) {
        return to_python(run_simulate(Scenario::load(path), run, out));
    }, py::arg("scenario"), py::arg("run"), py::arg("out"));
    m.def("reduce", [](const std::string& path, const std::string& run) {
        return to_python(run_reduce(Scenario::load(path), run));
    }, py::arg("scenario"), py::arg("run"));
    m.def("info", [](const std::string& path) { return to_python(Scenario::load(path).info()); }, py::arg("scenario"));

    m.def("trajectory", [](const std::string& path, const std::string& run_id) {
        const Scenario s = Scenario::load(path);
        const Trajectory t = run_trajectory(s, s.run(run_id));
        const auto rows = static_cast<Eigen::Index>(t.points.size());
        const int n = s.chart().dim();
        const int dim = s.group()->dim();
        Mat x(rows, n), pi(rows, n), rho(rows, dim), j0(rows, dim);
        Vec time(rows), energy(rows);
        for (Eigen::Index k = 0; k < rows; ++k) {
            const PhasePoint& z = t.points[static_cast<std::size_t>(k)];
            time(k) = t.times[static_cast<std::size_t>(k)];
            energy(k) = t.energy[static_cast<std::size_t>(k)];
            x.row(k) = z.x.transpose();
            pi.row(k) = z.pi.transpose();
            rho.row(k) = z.rho.coords.transpose();
            j0.row(k) = t.momentum[static_cast<std::size_t>(k)].transpose();
        }
        py::dict out;
        out["t"] = time;
        out["x"] = x;
        out["pi"] = pi;
        out["rho"] = rho;
        out["H"] = energy;
        out["J0"] = j0;
        out["left_chart"] = t.left_chart;
        return out;
    }, py::arg("scenario"), py::arg("run"), "Integrated run as numpy arrays keyed t, x, pi, rho, H, J0.");
}
