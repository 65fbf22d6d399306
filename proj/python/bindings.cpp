#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <tuple>
#include <vector>

#include "hp2d/clip_engine.hpp"
#include "hp2d/testgen.hpp"

namespace py = pybind11;
using namespace hp2d;

namespace {

py::dict box_dict(const VertexBox<double>& b) {
  py::dict d;
  d["ur"] = b.ur;
  d["us"] = b.us;
  d["ud"] = b.ud;
  d["or"] = b.or_;
  d["os"] = b.os;
  d["od"] = b.od;
  return d;
}

py::list snapshot_list(const Region<double>& r) {
  py::list out;
  for (const auto& e : r.snapshot().entries) {
    py::dict d;
    d["octant"] = e.constraint.octant;
    d["n"] = e.constraint.n;
    d["c"] = e.constraint.c;
    const auto [a, b] = reconstruct_coefficients(e.constraint);
    d["a"] = a;
    d["b"] = b;
    d["vertex"] = e.box ? py::object(box_dict(*e.box)) : py::object(py::none());
    out.append(d);
  }
  return out;
}

std::vector<std::tuple<std::int64_t, std::int64_t>> to_tuples(const testgen::NormalSet& ns) {
  std::vector<std::tuple<std::int64_t, std::int64_t>> out;
  for (const auto& v : ns) out.emplace_back(v.x, v.y);
  return out;
}

testgen::NormalSet from_tuples(const std::vector<std::tuple<std::int64_t, std::int64_t>>& v) {
  testgen::NormalSet out;
  for (const auto& [x, y] : v) out.push_back({x, y});
  return out;
}

py::list constraint_list(const std::vector<testgen::IntConstraint>& cs) {
  py::list out;
  for (const auto& c : cs) out.append(py::make_tuple(c.normal.x, c.normal.y, c.c));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Conservative half-plane intersection with exact decisions";

  m.attr("LARGEST_FINITE") = largest_finite<double>;
  m.def("ru_add", &ru_add<double>, "Least double >= x + y");
  m.def("ru_mul", &ru_mul<double>, "Least double >= x * y");
  m.def("ru_div", [](double x, double y) {
    if (y == 0.0) throw ContractViolation("division by zero");
    return ru_div<double>(x, y);
  }, "Least double >= x / y");
  m.def("exact_sign", [](const std::vector<std::tuple<bool, double, double, double>>& terms) {
    if (terms.size() > 16) throw ContractViolation("at most 16 terms");
    std::vector<SignedTriple<double>> t;
    for (const auto& [neg, a, b, c] : terms) t.push_back({neg, {a, b, c}});
    return static_cast<int>(exact_sign_sum(t));
  }, "Exact sign of a sum of signed triple products (negative, f0, f1, f2)");

  m.def("classify_octant", &classify_octant<double>);
  m.def("normalize", [](double a, double b, double c) -> py::object {
    const auto r = normalize(RawConstraint<double>{a, b, c});
    switch (r.status) {
      case NormalizeStatus::Redundant: return py::str("redundant");
      case NormalizeStatus::OverflowInfeasible: return py::str("infeasible");
      default: return py::make_tuple(r.constraint.octant, r.constraint.n, r.constraint.c);
    }
  }, "Normalized (octant, n, c), or 'redundant' / 'infeasible' on overflow");
  m.def("compare_directions", [](int o1, double n1, int o2, double n2) {
    switch (compare_directions(DirectionKey<double>{o1, n1}, DirectionKey<double>{o2, n2})) {
      case Order::Before: return -1;
      case Order::Equal: return 0;
      default: return 1;
    }
  });

  py::class_<Region<double>>(m, "Region")
      .def(py::init([](double mx, double my) { return Region<double>::box(mx, my); }), py::arg("mx"), py::arg("my"))
      .def("add_constraint", [](Region<double>& r, double a, double b, double c) {
        r.add_constraint({a, b, c});
      }, py::arg("a"), py::arg("b"), py::arg("c"))
      .def_property_readonly("kind", [](const Region<double>& r) { return std::string(to_string(r.kind())); })
      .def("snapshot", &snapshot_list)
      .def("validate", [](const Region<double>& r) -> py::object {
        if (auto err = r.validate()) return py::str(*err);
        return py::none();
      })
      .def("__copy__", [](const Region<double>& r) { return Region<double>(r); })
      .def("copy", [](const Region<double>& r) { return Region<double>(r); });

  m.def("counters", [] {
    const auto& c = op_counters();
    py::dict d;
    d["divisions"] = c.divisions;
    d["direction_comparisons"] = c.direction_comparisons;
    d["side_tests"] = c.side_tests;
    d["exact_fallbacks"] = c.exact_fallbacks;
    return d;
  });
  m.def("reset_counters", &reset_op_counters);

  m.def("normal_set_32", [] { return to_tuples(testgen::normal_set_32()); });
  m.def("normal_set_64", [] { return to_tuples(testgen::normal_set_64()); });
  m.def("is_valid_subset", [](const std::vector<std::tuple<std::int64_t, std::int64_t>>& v) {
    return testgen::is_valid_subset(from_tuples(v));
  });
  m.def("build_polygon", [](const std::vector<std::tuple<std::int64_t, std::int64_t>>& normals, int beta,
                            std::uint64_t seed) {
    const auto ns = from_tuples(normals);
    if (!testgen::is_valid_subset(ns)) throw ContractViolation("normals are not a valid ccw subset");
    if (beta < 1 || beta > 30) throw ContractViolation("beta must lie in [1, 30]");
    testgen::Rng rng(seed);
    const auto p = testgen::build_polygon(ns, beta, rng);
    py::dict d;
    d["x"] = p.x;
    d["y"] = p.y;
    d["lengths"] = p.lengths;
    d["constraints"] = constraint_list(testgen::polygon_constraints(p));
    d["box"] = testgen::start_box_extent(beta);
    return d;
  });
  m.def("gen_degenerate", [](const std::string& kind, int beta, std::uint64_t seed) {
    testgen::DegenerateKind k;
    if (kind == "point") k = testgen::DegenerateKind::Point;
    else if (kind == "segment") k = testgen::DegenerateKind::Segment;
    else if (kind == "empty") k = testgen::DegenerateKind::Empty;
    else throw ContractViolation("kind must be point, segment or empty");
    testgen::Rng rng(seed);
    const auto dc = testgen::gen_degenerate(k, beta, rng);
    py::dict d;
    d["constraints"] = constraint_list(dc.constraints);
    py::list pts;
    for (const auto& v : dc.expected) pts.append(py::make_tuple(v.x, v.y));
    d["expected"] = pts;
    d["box"] = testgen::start_box_extent(beta);
    return d;
  });
}
