#include "csw/formula/ast.hpp"

#include <cmath>
#include <functional>

#include "csw/algebra/shape.hpp"
#include "csw/formula/printer.hpp"

namespace csw::formula {

namespace {

TermPtr make_term(Term t) { return std::make_shared<const Term>(std::move(t)); }
FormulaPtr make_formula(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

void require(bool ok, const char* what) {
  if (!ok) throw ValidationError(what);
}

}  // namespace

TermPtr variable(std::string name) { return make_term({TermKind::Variable, std::move(name), {}, nullptr, nullptr}); }
TermPtr identity() { return make_term({TermKind::Identity, {}, {}, nullptr, nullptr}); }
TermPtr zero() { return make_term({TermKind::Zero, {}, {}, nullptr, nullptr}); }

TermPtr scale(Complex c, TermPtr t) {
  require(t != nullptr, "scale of a null term");
  return make_term({TermKind::Scale, {}, c, std::move(t), nullptr});
}

TermPtr sum(TermPtr a, TermPtr b) {
  require(a && b, "sum of a null term");
  return make_term({TermKind::Sum, {}, {}, std::move(a), std::move(b)});
}

TermPtr difference(TermPtr a, TermPtr b) { return sum(std::move(a), scale(-1.0, std::move(b))); }

TermPtr product(TermPtr a, TermPtr b) {
  require(a && b, "product of a null term");
  return make_term({TermKind::Product, {}, {}, std::move(a), std::move(b)});
}

TermPtr adjoint(TermPtr t) {
  require(t != nullptr, "adjoint of a null term");
  if (t->kind == TermKind::Adjoint) return t->lhs;
  return make_term({TermKind::Adjoint, {}, {}, std::move(t), nullptr});
}

Sort Sort::interval(double lo, double hi) {
  if (!(lo <= hi)) throw ValidationError("interval(lo,hi) needs lo ≤ hi");
  return Sort{SortKind::ScalarInterval, lo, hi};
}

std::string Sort::to_string() const {
  switch (kind) {
    case SortKind::Ball: return "ball";
    case SortKind::SelfAdjointBall: return "sa_ball";
    case SortKind::PositiveBall: return "pos_ball";
    case SortKind::Projection: return "proj";
    case SortKind::NonzeroProjection: return "proj_nz";
    case SortKind::NontrivialProjection: return "proj_nt";
    case SortKind::CentralProjection: return "proj_central";
    case SortKind::Unitary: return "unitary";
    case SortKind::PartialIsometry: return "pisom";
    case SortKind::ScalarDisk: return "disk";
    case SortKind::ScalarInterval: return "interval(" + format_real(lo) + "," + format_real(hi) + ")";
  }
  return "?";
}

FormulaPtr norm(TermPtr t) {
  require(t != nullptr, "norm of a null term");
  Formula f{FormulaKind::Norm};
  f.term = std::move(t);
  return make_formula(std::move(f));
}

FormulaPtr constant(double c) {
  require(std::isfinite(c) && c >= 0.0, "formula constants must be finite and nonnegative");
  Formula f{FormulaKind::Constant};
  f.value = c;
  return make_formula(std::move(f));
}

namespace {

FormulaPtr binary(FormulaKind kind, FormulaPtr a, FormulaPtr b) {
  require(a && b, "connective with a null operand");
  Formula f{kind};
  f.lhs = std::move(a);
  f.rhs = std::move(b);
  return make_formula(std::move(f));
}

FormulaPtr quantifier(FormulaKind kind, std::string var, Sort sort, FormulaPtr body) {
  require(body != nullptr, "quantifier with a null body");
  require(!var.empty(), "quantifier needs a variable name");
  Formula f{kind};
  f.var = std::move(var);
  f.sort = sort;
  f.body = std::move(body);
  return make_formula(std::move(f));
}

}  // namespace

FormulaPtr add(FormulaPtr a, FormulaPtr b) { return binary(FormulaKind::Sum, std::move(a), std::move(b)); }
FormulaPtr multiply(FormulaPtr a, FormulaPtr b) { return binary(FormulaKind::Product, std::move(a), std::move(b)); }
FormulaPtr abs_diff(FormulaPtr a, FormulaPtr b) { return binary(FormulaKind::AbsDiff, std::move(a), std::move(b)); }
FormulaPtr max_of(FormulaPtr a, FormulaPtr b) { return binary(FormulaKind::Max, std::move(a), std::move(b)); }
FormulaPtr min_of(FormulaPtr a, FormulaPtr b) { return binary(FormulaKind::Min, std::move(a), std::move(b)); }

FormulaPtr scale(double c, FormulaPtr f) {
  require(std::isfinite(c) && c >= 0.0, "formula scalar multiples must be finite and nonnegative");
  require(f != nullptr, "scale of a null formula");
  Formula g{FormulaKind::Scale};
  g.value = c;
  g.lhs = std::move(f);
  return make_formula(std::move(g));
}

FormulaPtr sup(std::string var, Sort sort, FormulaPtr body) {
  return quantifier(FormulaKind::Sup, std::move(var), sort, std::move(body));
}

FormulaPtr inf(std::string var, Sort sort, FormulaPtr body) {
  return quantifier(FormulaKind::Inf, std::move(var), sort, std::move(body));
}

std::string to_string(Polarity p) {
  switch (p) {
    case Polarity::PureSup: return "pure-sup";
    case Polarity::PureInf: return "pure-inf";
    case Polarity::Alternating: return "alternating";
  }
  return "?";
}

namespace {

void collect_term_vars(const Term& t, std::multiset<std::string>& bound, std::set<std::string>& out) {
  switch (t.kind) {
    case TermKind::Variable:
      if (!bound.contains(t.name)) out.insert(t.name);
      break;
    case TermKind::Identity:
    case TermKind::Zero: break;
    case TermKind::Scale:
    case TermKind::Adjoint: collect_term_vars(*t.lhs, bound, out); break;
    case TermKind::Sum:
    case TermKind::Product:
      collect_term_vars(*t.lhs, bound, out);
      collect_term_vars(*t.rhs, bound, out);
      break;
  }
}

void collect_vars(const Formula& f, std::multiset<std::string>& bound, std::set<std::string>& out) {
  switch (f.kind) {
    case FormulaKind::Norm: collect_term_vars(*f.term, bound, out); break;
    case FormulaKind::Constant: break;
    case FormulaKind::Scale: collect_vars(*f.lhs, bound, out); break;
    case FormulaKind::Sum:
    case FormulaKind::Product:
    case FormulaKind::AbsDiff:
    case FormulaKind::Max:
    case FormulaKind::Min:
      collect_vars(*f.lhs, bound, out);
      collect_vars(*f.rhs, bound, out);
      break;
    case FormulaKind::Sup:
    case FormulaKind::Inf: {
      auto it = bound.insert(f.var);
      collect_vars(*f.body, bound, out);
      bound.erase(it);
      break;
    }
  }
}

void count_kinds(const Formula& f, int& sups, int& infs) {
  switch (f.kind) {
    case FormulaKind::Norm:
    case FormulaKind::Constant: return;
    case FormulaKind::Scale: count_kinds(*f.lhs, sups, infs); return;
    case FormulaKind::Sup: ++sups; count_kinds(*f.body, sups, infs); return;
    case FormulaKind::Inf: ++infs; count_kinds(*f.body, sups, infs); return;
    default:
      count_kinds(*f.lhs, sups, infs);
      count_kinds(*f.rhs, sups, infs);
  }
}

}  // namespace

std::set<std::string> free_variables(const Formula& f) {
  std::multiset<std::string> bound;
  std::set<std::string> out;
  collect_vars(f, bound, out);
  return out;
}

bool is_sentence(const Formula& f) { return free_variables(f).empty(); }

Polarity polarity(const Formula& f) {
  if (!is_sentence(f)) throw ValidationError("polarity is defined for sentences only");
  int sups = 0, infs = 0;
  count_kinds(f, sups, infs);
  if (infs == 0) return Polarity::PureSup;
  if (sups == 0) return Polarity::PureInf;
  return Polarity::Alternating;
}

bool quantifiers_monotone(const Formula& f) {
  switch (f.kind) {
    case FormulaKind::Norm:
    case FormulaKind::Constant: return true;
    case FormulaKind::Scale: return quantifiers_monotone(*f.lhs);
    case FormulaKind::Sup:
    case FormulaKind::Inf: return quantifiers_monotone(*f.body);
    case FormulaKind::AbsDiff: return quantifier_count(*f.lhs) == 0 && quantifier_count(*f.rhs) == 0;
    default: return quantifiers_monotone(*f.lhs) && quantifiers_monotone(*f.rhs);
  }
}

int quantifier_count(const Formula& f) {
  int sups = 0, infs = 0;
  count_kinds(f, sups, infs);
  return sups + infs;
}

std::vector<PrefixEntry> quantifier_prefix(const Formula& f) {
  std::vector<PrefixEntry> out;
  const Formula* cur = &f;
  while (cur->is_quantifier()) {
    out.push_back({cur->kind, cur->var, cur->sort});
    cur = cur->body.get();
  }
  return out;
}

namespace {

using Renaming = std::vector<std::pair<std::string, std::string>>;

bool names_match(const std::string& a, const std::string& b, const Renaming* ren) {
  if (ren == nullptr) return a == b;
  for (auto it = ren->rbegin(); it != ren->rend(); ++it) {
    if (it->first == a || it->second == b) return it->first == a && it->second == b;
  }
  return a == b;
}

bool term_equal(const Term& a, const Term& b, const Renaming* ren) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case TermKind::Variable: return names_match(a.name, b.name, ren);
    case TermKind::Identity:
    case TermKind::Zero: return true;
    case TermKind::Scale: return a.coeff == b.coeff && term_equal(*a.lhs, *b.lhs, ren);
    case TermKind::Adjoint: return term_equal(*a.lhs, *b.lhs, ren);
    case TermKind::Sum:
    case TermKind::Product: return term_equal(*a.lhs, *b.lhs, ren) && term_equal(*a.rhs, *b.rhs, ren);
  }
  return false;
}

bool formula_equal(const Formula& a, const Formula& b, Renaming* ren) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case FormulaKind::Norm: return term_equal(*a.term, *b.term, ren);
    case FormulaKind::Constant: return a.value == b.value;
    case FormulaKind::Scale: return a.value == b.value && formula_equal(*a.lhs, *b.lhs, ren);
    case FormulaKind::Sup:
    case FormulaKind::Inf: {
      if (!(a.sort == b.sort)) return false;
      if (ren == nullptr) return a.var == b.var && formula_equal(*a.body, *b.body, nullptr);
      ren->emplace_back(a.var, b.var);
      const bool eq = formula_equal(*a.body, *b.body, ren);
      ren->pop_back();
      return eq;
    }
    default: return formula_equal(*a.lhs, *b.lhs, ren) && formula_equal(*a.rhs, *b.rhs, ren);
  }
}

}  // namespace

bool structurally_equal(const Formula& a, const Formula& b) { return formula_equal(a, b, nullptr); }
bool structurally_equal(const Term& a, const Term& b) { return term_equal(a, b, nullptr); }

bool alpha_equivalent(const Formula& a, const Formula& b) {
  Renaming ren;
  return formula_equal(a, b, &ren);
}

}  // namespace csw::formula
