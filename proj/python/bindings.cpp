#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "branchkh/generators.hpp"
#include "branchkh/invariants.hpp"
#include "branchkh/kh.hpp"
#include "branchkh/surgery.hpp"
#include "branchkh/verify.hpp"

namespace py = pybind11;
using namespace branchkh;

namespace {

Flavor flavor_of(bool reduced) { return reduced ? Flavor::Reduced : Flavor::Unreduced; }

py::dict ranks_dict(const KhRanks& k) {
  py::dict table;
  for (auto [ij, n] : k.table) table[py::make_tuple(ij.first, ij.second)] = n;
  return table;
}

py::dict poly_dict(const LaurentPoly& p) {
  py::dict out;
  for (auto [e, c] : p.terms()) out[py::int_(e)] = c;
  return out;
}

Slope slope_of(const py::object& s) {
  if (py::isinstance<py::str>(s)) return Slope::parse(s.cast<std::string>());
  if (py::isinstance<py::tuple>(s)) {
    auto t = s.cast<std::pair<int64_t, int64_t>>();
    return Slope(t.first, t.second);
  }
  return Slope(s.cast<int64_t>(), 1);
}

SurgerySign sign_of(const std::string& s) {
  if (s == "+") return SurgerySign::Plus;
  if (s == "-") return SurgerySign::Minus;
  throw py::value_error("sign must be '+' or '-'");
}

}  // namespace

PYBIND11_MODULE(_branchkh, m) {
  m.doc() = "Khovanov homology ranks over F2 for PD diagrams";

  py::register_exception<DiagramError>(m, "DiagramError", PyExc_ValueError);
  py::register_exception<GuardExceeded>(m, "GuardExceeded", PyExc_RuntimeError);
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);

  py::class_<Diagram>(m, "Diagram")
      .def_property_readonly("crossing_count", &Diagram::crossing_count)
      .def_property_readonly("edge_count", &Diagram::edge_count)
      .def_property_readonly("basepoint", &Diagram::basepoint)
      .def_property_readonly("name", &Diagram::name)
      .def("with_basepoint", &Diagram::with_basepoint, py::arg("edge"))
      .def("writhe", [](const Diagram& d) { return writhe(d); })
      .def("component_count", [](const Diagram& d) { return component_count(d); })
      .def("digest", [](const Diagram& d) { return diagram_digest(d); })
      .def("mirror", [](const Diagram& d) { return mirror(d); })
      .def("__str__", [](const Diagram& d) { return render(d); })
      .def("__repr__", [](const Diagram& d) {
        return "<Diagram " + (d.name().empty() ? std::string("?") : d.name()) + ", " +
               std::to_string(d.crossing_count()) + " crossings>";
      })
      .def(py::self == py::self);

  m.def("parse_pd", [](const std::string& s) { return parse_pd(s); }, py::arg("text"));
  m.def("torus_knot", &torus_knot, py::arg("p"), py::arg("q"));
  m.def("torus_link", &torus_link, py::arg("p"), py::arg("q"));
  m.def("braid_closure", &braid_closure, py::arg("strands"), py::arg("word"));
  m.def("tau", [](const py::object& s) { return tau(slope_of(s)); }, py::arg("slope"),
        "Branch set tau(r/s); slope as 'r/s', an int, or (r, s).");
  m.def("seifert_branch_set",
        [](int q, int n, const std::string& sign) { return seifert_branch_set(q, n, sign_of(sign)); },
        py::arg("q"), py::arg("n"), py::arg("sign"));

  m.def("determinant", [](const Diagram& d) { return py::int_(py::str(determinant(d).str())); });
  m.def("jones", [](const Diagram& d, int max_crossings) {
    return poly_dict(jones_polynomial(d, max_crossings));
  }, py::arg("diagram"), py::arg("max_crossings") = 16, "Jones polynomial as {exponent of q: coefficient}.");

  m.def("kh", [](const Diagram& d, bool reduced, int64_t max_generators) {
    ScanOptions opts;
    opts.max_generators = max_generators;
    KhRanks k;
    {
      py::gil_scoped_release release;
      k = scan_ranks(d, flavor_of(reduced), opts);
    }
    return ranks_dict(k);
  }, py::arg("diagram"), py::arg("reduced") = true, py::arg("max_generators") = 4'000'000,
        "Ranks {(i, j): rank} by the scanning engine.");
  m.def("kh_cube", [](const Diagram& d, bool reduced) {
    return ranks_dict(homology_ranks(cube_complex(d, flavor_of(reduced))));
  }, py::arg("diagram"), py::arg("reduced") = true, "Ranks from the full cube (at most 16 crossings).");
  m.def("kh_rank", [](const Diagram& d, bool reduced) {
    py::gil_scoped_release release;
    return scan_ranks(d, flavor_of(reduced)).total;
  }, py::arg("diagram"), py::arg("reduced") = true);

  m.def("base_orbifold", [](int64_t p, int64_t q, int64_t n, const std::string& sign) {
    return base_orbifold(p, q, n, sign_of(sign)).orders;
  }, py::arg("p"), py::arg("q"), py::arg("n"), py::arg("sign"));
  m.def("slope_distance", [](const py::object& a, const py::object& b) {
    return slope_distance(slope_of(a), slope_of(b));
  });

  m.def("reproduce_paper", [](int tier, int threads) {
    VerifyOptions opts;
    opts.threads = threads;
    std::vector<ClaimRecord> claims;
    {
      py::gil_scoped_release release;
      claims = reproduce_paper(tier, opts);
    }
    py::list out;
    for (const auto& c : claims) {
      py::dict d;
      d["description"] = c.description;
      d["expected"] = c.expected;
      d["computed"] = c.computed ? py::cast(*c.computed) : py::none();
      d["status"] = status_name(c.status);
      d["tier"] = c.tier;
      d["note"] = c.note;
      out.append(d);
    }
    return out;
  }, py::arg("tier") = 1, py::arg("threads") = 1);
}
