// Exact values of recognized sentences, computed from the block shape alone.

#include <cmath>

#include "csw/evaluator/evaluate.hpp"
#include "csw/formula/corpus.hpp"

namespace csw {

using namespace formula;

namespace {

const char* const kTemplates[] = {"phi_c",           "phi_u",        "central_proj_exists",
                                  "comparability",   "minimal_iff_corner", "dominates_minimal",
                                  "decompose_d2",    "comm_pc_axiom4"};

// n when f has the outer shape of a Dixmier sentence |max(psi, 1/n) - 1/n|.
std::optional<int> dixmier_index(const Formula& f) {
  if (f.kind != FormulaKind::AbsDiff || f.rhs->kind != FormulaKind::Constant) return std::nullopt;
  const double c = f.rhs->value;
  if (!(c > 0.0) || c > 1.0) return std::nullopt;
  const double n = std::round(1.0 / c);
  if (n < 1 || n > 64 || std::abs(1.0 / n - c) > 1e-12) return std::nullopt;
  return static_cast<int>(n);
}

std::optional<double> template_value(const std::string& name, const BlockShape& shape) {
  const std::size_t k = shape.num_blocks();
  if (name == "phi_c") return shape.is_commutative() ? 0.0 : 2.0;
  if (name == "central_proj_exists") return k >= 2 ? 0.0 : 1.0;
  // An incomparable pair of rank tuples exists iff there are two blocks; for
  // such a pair both factors are at least 1 and x = 0 makes both exactly 1.
  if (name == "comparability") return k >= 2 ? 1.0 : 0.0;
  if (name == "comm_pc_axiom4") {
    if (!shape.is_commutative()) return std::nullopt;
    return 0.0;
  }
  return 0.0;  // phi_u, minimal_iff_corner, dominates_minimal, decompose_d2, dixmier_n
}

std::optional<double> exact_value(const Formula& f, const BlockShape& shape) {
  if (f.kind == FormulaKind::Constant) return f.value;
  if (f.kind == FormulaKind::Norm) return evaluate_at(f, shape, {});
  if (auto name = registry_match(f)) return template_value(*name, shape);
  if (f.is_quantifier()) return std::nullopt;
  if (f.kind == FormulaKind::Scale) {
    auto a = exact_value(*f.lhs, shape);
    if (!a) return std::nullopt;
    return f.value * *a;
  }
  auto a = exact_value(*f.lhs, shape);
  if (!a) return std::nullopt;
  auto b = exact_value(*f.rhs, shape);
  if (!b) return std::nullopt;
  switch (f.kind) {
    case FormulaKind::Sum: return *a + *b;
    case FormulaKind::Product: return *a * *b;
    case FormulaKind::AbsDiff: return std::abs(*a - *b);
    case FormulaKind::Max: return std::max(*a, *b);
    case FormulaKind::Min: return std::min(*a, *b);
    default: return std::nullopt;
  }
}

}  // namespace

std::optional<std::string> registry_match(const Formula& f) {
  if (!is_sentence(f)) return std::nullopt;
  for (const char* name : kTemplates) {
    if (alpha_equivalent(f, *corpus_formula(name))) return std::string(name);
  }
  if (auto n = dixmier_index(f)) {
    if (alpha_equivalent(f, *dixmier_sentence(*n))) return "dixmier_" + std::to_string(*n);
  }
  return std::nullopt;
}

std::optional<EvalResult> evaluate_exact(const Formula& f, const BlockShape& shape) {
  if (!is_sentence(f)) throw ValidationError("evaluation needs a sentence; free variables present");
  auto v = exact_value(f, shape);
  if (!v) return std::nullopt;
  EvalResult r;
  r.value = *v;
  r.exact = true;
  r.bound = BoundKind::Estimate;
  return r;
}

EvalResult evaluate(const Formula& f, const BlockShape& shape, const EvalConfig& cfg) {
  if (auto r = evaluate_exact(f, shape)) {
    r->config = cfg;
    return *r;
  }
  return evaluate_numeric(f, shape, cfg);
}

}  // namespace csw
