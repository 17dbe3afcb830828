// pybind11 surface: the handful of operations a notebook user needs (model
// loading, L evaluation, resonance search, S-matrix, density, Gamov data,
// survival amplitude). Everything heavier stays behind the CLI.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "resokit/gamov.hpp"
#include "resokit/livsic.hpp"
#include "resokit/model.hpp"
#include "resokit/resonance.hpp"
#include "resokit/scattering.hpp"
#include "resokit/semigroup.hpp"
#include "resokit/types.hpp"

namespace py = pybind11;
using namespace resokit;

namespace {

Branch branch_from_name(const std::string& name) {
    if (name == "plus_upper") return Branch::plus_upper;
    if (name == "plus_boundary") return Branch::plus_boundary;
    if (name == "plus_continued") return Branch::plus_continued;
    if (name == "minus_lower") return Branch::minus_lower;
    if (name == "minus_boundary") return Branch::minus_boundary;
    throw std::invalid_argument("unknown branch: " + name);
}

Rectangle rect_or_default(const ModelSpec& m, const std::optional<std::array<double, 4>>& r) {
    if (r) return Rectangle{(*r)[0], (*r)[1], (*r)[2], (*r)[3]};
    Rectangle d = m.region;
    d.im_min = std::max(d.im_min, -1.0);
    d.im_max = std::min(d.im_max, -1e-4);
    return d;
}

CVector probe_or_default(const ModelSpec& m, const std::optional<CVector>& e) {
    if (e) return *e;
    CVector p = CVector::Zero(m.n);
    p[0] = 1.0;
    return p;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "Finite-dimensional Friedrichs model: resonances, scattering, decay.";

    py::register_exception<KitError>(mod, "KitError");

    py::class_<ModelSpec>(mod, "Model")
        .def_static("from_file", &load_model_file, py::arg("path"))
        .def_static("from_string", &parse_model, py::arg("text"))
        .def_readonly("n", &ModelSpec::n)
        .def_property_readonly("hash", &ModelSpec::hash_hex)
        .def("M", &ModelSpec::M, py::arg("z"))
        .def("B", &ModelSpec::B, py::arg("z"))
        .def("scan_range", &ModelSpec::scan_range)
        .def("__repr__", [](const ModelSpec& m) {
            return "<resokit.Model n=" + std::to_string(m.n) + " hash=" + m.hash_hex() + ">";
        });

    py::class_<Resonance>(mod, "Resonance")
        .def_readonly("zeta", &Resonance::zeta)
        .def_readonly("det_order", &Resonance::det_order)
        .def_readonly("q", &Resonance::q)
        .def_readonly("residual", &Resonance::residual)
        .def_readonly("kernel_basis", &Resonance::kernel_basis)
        .def("__repr__", [](const Resonance& r) {
            return "<resokit.Resonance zeta=(" + std::to_string(r.zeta.real()) + "," +
                   std::to_string(r.zeta.imag()) + ") q=" + std::to_string(r.q) + ">";
        });

    mod.def(
        "eval_L",
        [](const ModelSpec& m, Complex z, const std::string& branch) {
            return eval_L(m, z, branch_from_name(branch)).matrix;
        },
        py::arg("model"), py::arg("z"), py::arg("branch") = "plus_upper");

    mod.def(
        "locate_resonances",
        [](const ModelSpec& m, const std::optional<std::array<double, 4>>& rect) {
            const LocateResult lr = locate_resonances(m, rect_or_default(m, rect));
            if (!lr.complete) throw SearchError("subdivision depth exhausted");
            return lr.found;
        },
        py::arg("model"), py::arg("rect") = py::none());

    mod.def(
        "s_matrix_K",
        [](const ModelSpec& m, double lam) { return s_matrix_K(m, lam); },
        py::arg("model"), py::arg("lam"));

    mod.def(
        "rho",
        [](const ModelSpec& m, double lam, const std::optional<CVector>& e) {
            return SpectralDensity(m).rho(lam, probe_or_default(m, e));
        },
        py::arg("model"), py::arg("lam"), py::arg("e") = py::none());

    mod.def(
        "gamov_k0",
        [](const ModelSpec& m, const Resonance& r) { return gamov_vector(m, r).k0; },
        py::arg("model"), py::arg("resonance"));

    mod.def(
        "survival_amplitude",
        [](const ModelSpec& m, const std::vector<double>& times,
           const std::optional<CVector>& e) {
            std::vector<Complex> amps;
            for (const auto& p : survival_amplitude(m, probe_or_default(m, e), times))
                amps.push_back(p.a);
            return amps;
        },
        py::arg("model"), py::arg("times"), py::arg("e") = py::none());
}
