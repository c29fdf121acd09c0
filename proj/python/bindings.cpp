#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "csw/algebra/io.hpp"
#include "csw/evaluator/evaluate.hpp"
#include "csw/formula/corpus.hpp"
#include "csw/formula/parser.hpp"
#include "csw/formula/printer.hpp"
#include "csw/limits/limits.hpp"
#include "csw/structure/archbold.hpp"
#include "csw/structure/comparison.hpp"
#include "csw/structure/decomposition.hpp"
#include "csw/structure/dixmier.hpp"
#include "csw/structure/k0.hpp"
#include "csw/structure/trace.hpp"
#include "csw/structure/unitary.hpp"

namespace py = pybind11;
using namespace csw;

namespace {

// Structured results cross the boundary as JSON text; the Python package
// decodes them.
std::string dump(const nlohmann::json& j) { return j.dump(); }

Element from_blocks(const std::vector<Matrix>& blocks) {
  std::vector<int> sizes;
  for (const auto& b : blocks) {
    if (b.rows() != b.cols()) throw ValidationError("every block must be square");
    sizes.push_back(static_cast<int>(b.rows()));
  }
  return Element(BlockShape(sizes), blocks);
}

std::vector<Matrix> to_blocks(const Element& e) { return {e.blocks().begin(), e.blocks().end()}; }

formula::FormulaPtr load_formula(const std::string& text) {
  for (const auto& e : formula::corpus()) {
    if (e.name == text) return e.formula;
  }
  if (text.rfind("dixmier_", 0) == 0) return formula::corpus_formula(text);
  return formula::parse(text);
}

EvalConfig make_config(std::uint64_t seed, int restarts, int inner_restarts, int local_steps) {
  EvalConfig c;
  c.seed = seed;
  c.restarts = restarts;
  c.inner_restarts = inner_restarts;
  c.local_steps = local_steps;
  c.validate();
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Finite-dimensional C*-algebra workbench";
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

  py::class_<BlockShape>(m, "Shape")
      .def(py::init<std::vector<int>>())
      .def_static("parse", &BlockShape::parse)
      .def_property_readonly("blocks", [](const BlockShape& s) { return std::vector<int>(s.blocks().begin(), s.blocks().end()); })
      .def_property_readonly("dimension", &BlockShape::dimension)
      .def_property_readonly("matrix_size", &BlockShape::matrix_size)
      .def("is_commutative", &BlockShape::is_commutative)
      .def("__str__", &BlockShape::to_string)
      .def("__repr__", [](const BlockShape& s) { return "Shape('" + s.to_string() + "')"; })
      .def("__eq__", [](const BlockShape& a, const BlockShape& b) { return a == b; }, py::is_operator());

  m.def("corpus_names", [] {
    std::vector<std::string> names;
    for (const auto& e : formula::corpus()) names.push_back(e.name);
    return names;
  });
  m.def("corpus_text", [](const std::string& name) { return formula::corpus_entry(name).text; });
  m.def("canonical", [](const std::string& text) { return formula::to_string(*formula::parse(text)); });

  m.def(
      "evaluate",
      [](const std::string& f, const std::string& algebra, const std::string& mode, std::uint64_t seed, int restarts,
         int inner_restarts, int local_steps) {
        const auto formula = load_formula(f);
        const BlockShape shape = BlockShape::parse(algebra);
        const EvalConfig cfg = make_config(seed, restarts, inner_restarts, local_steps);
        EvalResult r;
        if (mode == "exact") {
          auto e = evaluate_exact(*formula, shape);
          if (!e) throw ValidationError("no registry template matches");
          r = *e;
          r.config = cfg;
        } else if (mode == "numeric") {
          r = evaluate_numeric(*formula, shape, cfg);
        } else if (mode == "auto") {
          r = evaluate(*formula, shape, cfg);
        } else {
          throw ValidationError("mode must be auto, exact or numeric");
        }
        return dump(result_to_json(r, f, shape));
      },
      py::arg("formula"), py::arg("algebra"), py::arg("mode") = "auto", py::arg("seed") = 1, py::arg("restarts") = 32,
      py::arg("inner_restarts") = 16, py::arg("local_steps") = 200);

  m.def("decompose", [](const std::string& algebra, int d) {
    const BlockShape s = BlockShape::parse(algebra);
    return dump(decomposition_to_json(decompose_identity(s, d), s));
  });
  m.def("k0", [](const std::string& algebra) { return dump(k0_to_json(k0_data(BlockShape::parse(algebra)))); });
  m.def("trace_estimate", [](const std::string& algebra, const std::vector<int>& ranks, int depth) {
    const BlockShape s = BlockShape::parse(algebra);
    if (ranks.size() != s.num_blocks()) throw ValidationError("one rank per block");
    const Rational r = trace_from_comparisons(Element::diagonal_projection(s, RankTuple{ranks}), depth, s);
    return std::pair<std::int64_t, std::int64_t>{r.num, r.den};
  });
  m.def(
      "dixmier",
      [](const std::vector<Matrix>& x, const std::string& mode) {
        const DixmierMode md = mode == "exact" ? DixmierMode::Exact : DixmierMode::Iterative;
        if (mode != "exact" && mode != "iter") throw ValidationError("mode must be exact or iter");
        return dump(dixmier_to_json(dixmier_average(from_blocks(x), md)));
      },
      py::arg("x"), py::arg("mode") = "exact");
  m.def("center_valued_trace", [](const std::vector<Matrix>& x) { return to_blocks(center_valued_trace(from_blocks(x))); });
  m.def(
      "archbold",
      [](const std::vector<Matrix>& a, std::uint64_t seed, int restarts) {
        EvalConfig cfg;
        cfg.seed = seed;
        cfg.restarts = restarts;
        cfg.validate();
        const auto k = archbold_constants(from_blocks(a), cfg);
        return std::pair<double, double>{k.dist_to_center, k.derivation_norm};
      },
      py::arg("a"), py::arg("seed") = 1, py::arg("restarts") = 32);
  m.def("mvn_compare", [](const std::vector<Matrix>& p, const std::vector<Matrix>& q) {
    return to_string(mvn_compare(from_blocks(p), from_blocks(q)).relation);
  });
  m.def("minimal_projection_under", [](const std::vector<Matrix>& q) {
    return to_blocks(minimal_projection_under(from_blocks(q)));
  });
  m.def("unitary_log", [](const std::vector<Matrix>& u) { return to_blocks(unitary_log(from_blocks(u))); });
  m.def("homotopy_path", [](const std::vector<Matrix>& h, double t) { return to_blocks(homotopy_path(from_blocks(h), t)); });

  m.def(
      "eval_along",
      [](const std::string& f, const std::string& rule, int modulus, std::uint64_t seed) {
        EvalConfig cfg;
        cfg.seed = seed;
        return dump(limit_report_to_json(eval_along(*load_formula(f), AlgebraSequence::parse(rule), cfg, modulus)));
      },
      py::arg("formula"), py::arg("rule"), py::arg("modulus") = 1, py::arg("seed") = 1);
  m.def(
      "finite_model_search",
      [](const std::string& f, double eps, int max_dim, std::uint64_t seed) {
        EvalConfig cfg;
        cfg.seed = seed;
        return dump(search_result_to_json(finite_model_search(*load_formula(f), eps, max_dim, cfg)));
      },
      py::arg("formula"), py::arg("eps"), py::arg("max_dim"), py::arg("seed") = 1);
  m.def("enumerate_shapes", &enumerate_shapes);
  m.def("k0_demo", [](double s, double lambda, const std::vector<std::int64_t>& ns) {
    return dump(k0_demo_to_json(k0_demo_sequences(s, lambda, ns)));
  });
  m.def(
      "mod_d_invariant",
      [](const std::string& rule, std::int64_t d, std::optional<std::pair<int, int>> sub) {
        std::optional<Subsequence> s;
        if (sub) s = Subsequence{sub->first, sub->second};
        return dump(mod_invariant_to_json(mod_d_invariant(IntegerRule::parse(rule), d, s)));
      },
      py::arg("rule"), py::arg("d"), py::arg("subsequence") = std::nullopt);
}
