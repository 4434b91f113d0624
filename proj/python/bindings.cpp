#include <pybind11/complex.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "polyinc/errors.hpp"
#include "polyinc/incidence.hpp"
#include "polyinc/lab.hpp"

namespace py = pybind11;
using namespace polyinc;

namespace {

// JSON crosses the boundary as text; the Python side decodes it.
std::string dump(const nlohmann::ordered_json& j) { return j.dump(); }

SpacePtr make_space(const std::string& field, const std::string& support,
                    std::uint64_t max_elements) {
  Budget budget;
  if (max_elements) budget.max_elements = max_elements;
  nlohmann::json sup = support;
  if (!support.empty() && support.front() == '{') sup = nlohmann::json::parse(support);
  return SpaceSpec{field, sup}.resolve(budget);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact polynomial incidence graph verifiers";

  auto base = py::register_exception<Error>(m, "PolyincError");
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<SizeLimitError>(m, "SizeLimitError", base.ptr());
  py::register_exception<HypothesisError>(m, "HypothesisError", base.ptr());
  py::register_exception<OverflowError>(m, "OverflowError", base.ptr());
  py::register_exception<IncompatibleOrderError>(m, "IncompatibleOrderError", base.ptr());

  py::class_<FieldCtx, std::shared_ptr<FieldCtx>>(m, "Field")
      .def(py::init([](std::uint32_t p, std::uint32_t s) {
             return std::const_pointer_cast<FieldCtx>(FieldCtx::make(p, s));
           }),
           py::arg("p"), py::arg("s") = 1)
      .def_property_readonly("p", &FieldCtx::p)
      .def_property_readonly("s", &FieldCtx::s)
      .def_property_readonly("q", &FieldCtx::q)
      .def_property_readonly("modulus", &FieldCtx::modulus)
      .def("add", [](const FieldCtx& f, std::uint32_t a, std::uint32_t b) {
        return f.add(f.from_index(a), f.from_index(b)).index;
      })
      .def("mul", [](const FieldCtx& f, std::uint32_t a, std::uint32_t b) {
        return f.mul(f.from_index(a), f.from_index(b)).index;
      })
      .def("inv", [](const FieldCtx& f, std::uint32_t a) { return f.inv(f.from_index(a)).index; })
      .def("pow", [](const FieldCtx& f, std::uint32_t a, std::uint64_t k) {
        return f.pow(f.from_index(a), k).index;
      })
      .def("trace", [](const FieldCtx& f, std::uint32_t a) { return f.trace(f.from_index(a)); })
      .def("__repr__", &FieldCtx::name);

  m.def("conway_polynomial", &conway_polynomial, py::arg("p"), py::arg("s"));

  py::class_<CycInt>(m, "CycInt")
      .def(py::init<std::uint32_t, std::int64_t>(), py::arg("p"), py::arg("n") = 0)
      .def_static("root", &CycInt::root)
      .def_property_readonly("p", &CycInt::p)
      .def_property_readonly("coeffs", &CycInt::coeffs)
      .def("as_integer", &CycInt::as_integer)
      .def("to_complex", &CycInt::to_complex)
      .def("conj", &CycInt::conj)
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(py::self * py::self)
      .def(-py::self)
      .def(py::self == py::self)
      .def("__repr__", &CycInt::to_string);

  py::class_<PolySpace, std::shared_ptr<PolySpace>>(m, "PolySpace")
      .def(py::init([](const std::string& field, const std::string& support,
                       std::uint64_t max_elements) {
             return std::const_pointer_cast<PolySpace>(make_space(field, support, max_elements));
           }),
           py::arg("field"), py::arg("support"), py::arg("max_elements") = 0)
      .def_property_readonly("q", &PolySpace::q)
      .def_property_readonly("m", &PolySpace::m)
      .def_property_readonly("dim", &PolySpace::dim)
      .def_property_readonly("size", &PolySpace::size)
      .def("property_star", [](const PolySpace& s) { return s.property_star().holds; })
      .def("count_zeros", [](const PolySpace& s, std::uint64_t f) { return s.count_zeros(s.decode(f)); })
      .def("describe", &describe_space);

  m.def("connection", [](const std::shared_ptr<PolySpace>& s) {
    return incidence_connection(*s).int_values();
  });
  m.def("spectrum", [](const std::shared_ptr<PolySpace>& s, bool entries) {
    const IncidenceGraph g(s);
    return dump(g.spectrum().to_json(entries));
  }, py::arg("space"), py::arg("entries") = false);
  m.def("check_spectrum", [](const std::shared_ptr<PolySpace>& s) {
    const IncidenceGraph g(s);
    return dump(check_spectrum_formula(g).to_json());
  });
  m.def("key_lemma", [](const std::shared_ptr<PolySpace>& s) {
    return dump(verify_key_lemma(*s).to_json());
  });
  m.def("pp_incidence_sum", [](const std::shared_ptr<PolySpace>& s,
                               std::vector<std::uint64_t> L, std::vector<std::uint64_t> Lp) {
    const IncidenceGraph g(s);
    const auto r = pp_incidence_sum(g, PolySet(s, std::move(L)), PolySet(s, std::move(Lp)));
    return py::make_tuple(r.direct, r.via_graph);
  });
  m.def("point_poly_incidences", [](const std::shared_ptr<PolySpace>& s,
                                    std::vector<std::uint64_t> P, std::vector<std::uint64_t> L) {
    return point_poly_incidences(PointSet(s, std::move(P)), PolySet(s, std::move(L)));
  });
  m.def("counterexample", [](std::uint64_t q, std::uint32_t m_, std::uint32_t r) {
    const auto field = parse_field(nlohmann::json(q));
    return dump(example_counterexample(field, m_, r).verdict().to_json());
  });
  m.def("run", [](const std::string& config_json) {
    const auto cfg = ExperimentConfig::from_json(nlohmann::json::parse(config_json));
    const auto result = run_experiment(cfg);
    std::vector<std::string> lines;
    for (const auto& rec : result.records) lines.push_back(rec.to_json().dump());
    return py::make_tuple(result.exit_code(), lines);
  }, py::arg("config_json"));
  m.def("default_config", [] { return dump(ExperimentConfig::default_config().to_json()); });
}
