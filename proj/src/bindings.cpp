#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fanolab/poly_io.hpp"
#include "fanolab/report.hpp"

namespace py = pybind11;
using namespace fanolab;

namespace {

py::object json_to_py(const Json& j) {
    py::module_ pyjson = py::module_::import("json");
    return pyjson.attr("loads")(j.dump());
}

PipelineConfig config_from_kwargs(int i, uint64_t seed, int jet_order,
                                  const std::vector<uint32_t>& primes, int count) {
    PipelineConfig cfg;
    cfg.i = i;
    cfg.seed = seed;
    cfg.jet_order = jet_order;
    if (!primes.empty()) cfg.primes = primes;
    cfg.equiv_count = count;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "exact computations on Fano varieties of cyclic cubic fourfolds";

    m.def(
        "classify_germ",
        [](const std::string& poly, const std::vector<std::string>& vars, int jet_order) {
            VarNames names(vars);
            Germ<Rat> g(parse_poly(poly, names));
            auto t = classify(g, jet_order);
            return json_to_py(type_to_json(t));
        },
        py::arg("poly"), py::arg("vars"), py::arg("jet_order") = 8,
        "ADE classification of a hypersurface germ given as polynomial text");

    m.def(
        "milnor_number",
        [](const std::string& poly, const std::vector<std::string>& vars, long bound) -> py::object {
            VarNames names(vars);
            auto mo = milnor_number(parse_poly(poly, names), bound);
            if (!mo.bounded) return py::none();
            return py::int_(mo.mu);
        },
        py::arg("poly"), py::arg("vars"), py::arg("bound") = 20,
        "Milnor number from the local-algebra oracle; None when unbounded");

    m.def(
        "wall_row",
        [](const std::string& type_name) {
            std::vector<std::string> out;
            for (auto& t : wall_table(parse_type_name(type_name))) out.push_back(t.name());
            return out;
        },
        py::arg("type"), "singularities of Sigma for a branch point of the given type");

    m.def(
        "sample_instance",
        [](int i, uint64_t seed) {
            auto inst = sample_generic_instance(i, seed);
            return json_to_py(instance_to_json(inst));
        },
        py::arg("i"), py::arg("seed") = 1, "certified seeded cubic threefold instance");

    m.def(
        "gamma_type",
        [](int i, uint64_t seed, int jet_order) {
            auto cfg = config_from_kwargs(i, seed, jet_order, {}, 50);
            cfg.command = "gamma";
            auto res = cmd_gamma(cfg);
            return json_to_py(res.report);
        },
        py::arg("i"), py::arg("seed") = 1, py::arg("jet_order") = 8,
        "end-to-end gamma pipeline report for a sampled instance");

    m.def(
        "sigma_types",
        [](int i, uint64_t seed) {
            auto inst = sample_generic_instance(i, seed);
            auto y = build_cyclic_cover(inst.cubic);
            std::vector<std::string> out;
            for (auto& p : sigma_singular_points(y))
                out.push_back(p.type ? p.type->name() : "unresolved");
            return out;
        },
        py::arg("i"), py::arg("seed") = 1, "types of the singular points of Sigma");

    m.def(
        "plane_check",
        [](int i, uint64_t seed, const std::vector<uint32_t>& primes) {
            auto cfg = config_from_kwargs(i, seed, 8, primes, 50);
            cfg.command = "plane-check";
            auto res = cmd_plane_check(cfg);
            return json_to_py(res.report);
        },
        py::arg("i"), py::arg("seed") = 1, py::arg("primes") = std::vector<uint32_t>{5, 7},
        "exhaustive plane search report over the given primes");

    m.def(
        "equivariance",
        [](int i, uint64_t seed, int count) {
            auto cfg = config_from_kwargs(i, seed, 8, {}, count);
            cfg.command = "equivariance";
            auto res = cmd_equivariance(cfg);
            return json_to_py(res.report);
        },
        py::arg("i"), py::arg("seed") = 1, py::arg("count") = 50,
        "sigma-equivariance of residual lines on a sampled instance");

    m.def("lattice_table", []() {
        PipelineConfig cfg;
        cfg.command = "lattice-table";
        return json_to_py(cmd_lattice_table(cfg).report);
    });

    m.attr("__version__") = "1.0.0";
}
