#include "csw/formula/printer.hpp"

#include <array>
#include <charconv>

namespace csw::formula {

std::string format_real(double x) {
  if (x == 0.0) return "0";  // folds -0
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), end);
}

std::string format_complex(Complex c) {
  if (c.imag() == 0.0) return format_real(c.real());
  if (c.real() == 0.0) return format_real(c.imag()) + "i";
  std::string im = format_real(c.imag());
  if (im.front() != '-') im = "+" + im;
  return "(" + format_real(c.real()) + im + "i)";
}

namespace {

// Term precedence: 0 sum, 1 product, 2 factor. `star` is set when the text
// is immediately followed by '*', where a bare 0 would read as a coefficient.
std::string term_text(const Term& t, int ctx, bool star) {
  switch (t.kind) {
    case TermKind::Variable: return t.name;
    case TermKind::Identity: return "I";
    case TermKind::Zero: return star ? "(0)" : "0";
    case TermKind::Adjoint: return "adj(" + term_text(*t.lhs, 0, false) + ")";
    case TermKind::Scale: return format_complex(t.coeff) + "*" + term_text(*t.lhs, 2, star);
    case TermKind::Product: {
      if (ctx > 1) return "(" + term_text(t, 1, false) + ")";
      return term_text(*t.lhs, 1, true) + "*" + term_text(*t.rhs, 2, star);
    }
    case TermKind::Sum: {
      if (ctx > 0) return "(" + term_text(t, 0, false) + ")";
      std::string s = term_text(*t.lhs, 0, false);
      const Term& r = *t.rhs;
      if (r.kind == TermKind::Scale && r.coeff == Complex(-1.0, 0.0)) {
        s += " - " + term_text(*r.lhs, 1, star);
      } else {
        s += " + " + term_text(r, 1, star);
      }
      return s;
    }
  }
  return "?";
}

// A bare constant directly before or after '*' would be read back as a
// scalar multiple, so constants next to products are parenthesized.
std::string factor_text(const Formula& f, int ctx);

std::string formula_text(const Formula& f, int ctx) {
  switch (f.kind) {
    case FormulaKind::Norm: return "norm(" + term_text(*f.term, 0, false) + ")";
    case FormulaKind::Constant: return format_real(f.value);
    case FormulaKind::AbsDiff: return "abs(" + formula_text(*f.lhs, 0) + " - " + formula_text(*f.rhs, 0) + ")";
    case FormulaKind::Max: return "max(" + formula_text(*f.lhs, 0) + ", " + formula_text(*f.rhs, 0) + ")";
    case FormulaKind::Min: return "min(" + formula_text(*f.lhs, 0) + ", " + formula_text(*f.rhs, 0) + ")";
    case FormulaKind::Scale: return format_real(f.value) + " * " + factor_text(*f.lhs, 3);
    case FormulaKind::Product: {
      std::string s = factor_text(*f.lhs, 2) + " * " + factor_text(*f.rhs, 3);
      return ctx >= 3 ? "(" + s + ")" : s;
    }
    case FormulaKind::Sum: {
      std::string s = formula_text(*f.lhs, 1) + " + " + formula_text(*f.rhs, 2);
      return ctx >= 2 ? "(" + s + ")" : s;
    }
    case FormulaKind::Sup:
    case FormulaKind::Inf: {
      std::string s = (f.kind == FormulaKind::Sup ? "sup " : "inf ") + f.var + ":" + f.sort.to_string() + " . " +
                      formula_text(*f.body, 0);
      return ctx >= 1 ? "(" + s + ")" : s;
    }
  }
  return "?";
}

std::string factor_text(const Formula& f, int ctx) {
  if (f.kind == FormulaKind::Constant) return "(" + format_real(f.value) + ")";
  return formula_text(f, ctx);
}

}  // namespace

std::string to_string(const Formula& f) { return formula_text(f, 0); }
std::string to_string(const Term& t) { return term_text(t, 0, false); }

}  // namespace csw::formula
