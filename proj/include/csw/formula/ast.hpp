#pragma once

#include <complex>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace csw::formula {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Terms: *-polynomials in the bound variables.

enum class TermKind { Variable, Identity, Zero, Scale, Sum, Product, Adjoint };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  TermKind kind;
  std::string name;  // Variable
  Complex coeff{};   // Scale
  TermPtr lhs;       // Sum, Product; operand of Scale and Adjoint
  TermPtr rhs;       // Sum, Product
};

TermPtr variable(std::string name);
TermPtr identity();
TermPtr zero();
TermPtr scale(Complex c, TermPtr t);
TermPtr sum(TermPtr a, TermPtr b);
TermPtr difference(TermPtr a, TermPtr b);
TermPtr product(TermPtr a, TermPtr b);
/// adj(adj(t)) normalizes to t.
TermPtr adjoint(TermPtr t);

// ---------------------------------------------------------------------------
// Sorts: the definable sets a quantifier ranges over.

enum class SortKind {
  Ball,
  SelfAdjointBall,
  PositiveBall,
  Projection,
  NonzeroProjection,
  NontrivialProjection,  // neither 0 nor I; empty in M_1
  CentralProjection,
  Unitary,
  PartialIsometry,
  ScalarDisk,
  ScalarInterval,
};

struct Sort {
  SortKind kind = SortKind::Ball;
  double lo = 0.0;  // ScalarInterval only
  double hi = 0.0;

  static Sort of(SortKind kind) { return Sort{kind, 0.0, 0.0}; }
  static Sort interval(double lo, double hi);

  bool is_scalar() const { return kind == SortKind::ScalarDisk || kind == SortKind::ScalarInterval; }
  std::string to_string() const;
  friend bool operator==(const Sort&, const Sort&) = default;
};

// ---------------------------------------------------------------------------
// Formulas. Every connective preserves nonnegativity, so every formula the
// builders accept takes values in [0, inf).

enum class FormulaKind { Norm, Constant, Sum, Product, Scale, AbsDiff, Max, Min, Sup, Inf };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  FormulaKind kind;
  TermPtr term;        // Norm
  double value = 0.0;  // Constant; coefficient of Scale
  FormulaPtr lhs;      // binary connectives; operand of Scale
  FormulaPtr rhs;
  std::string var;     // Sup, Inf
  Sort sort;
  FormulaPtr body;

  bool is_quantifier() const { return kind == FormulaKind::Sup || kind == FormulaKind::Inf; }
};

FormulaPtr norm(TermPtr t);
FormulaPtr constant(double c);
FormulaPtr add(FormulaPtr a, FormulaPtr b);
FormulaPtr multiply(FormulaPtr a, FormulaPtr b);
FormulaPtr scale(double c, FormulaPtr f);
/// |a - b|
FormulaPtr abs_diff(FormulaPtr a, FormulaPtr b);
FormulaPtr max_of(FormulaPtr a, FormulaPtr b);
FormulaPtr min_of(FormulaPtr a, FormulaPtr b);
FormulaPtr sup(std::string var, Sort sort, FormulaPtr body);
FormulaPtr inf(std::string var, Sort sort, FormulaPtr body);

// ---------------------------------------------------------------------------
// Queries.

enum class Polarity { PureSup, PureInf, Alternating };

std::string to_string(Polarity p);

std::set<std::string> free_variables(const Formula& f);
bool is_sentence(const Formula& f);

/// Syntactic polarity. A quantifier-free sentence counts as PureSup.
/// Throws csw::ValidationError if `f` has free variables.
Polarity polarity(const Formula& f);

/// True when every quantifier sits in a position where the formula is
/// nondecreasing in the quantifier's value (not under abs).
bool quantifiers_monotone(const Formula& f);

int quantifier_count(const Formula& f);

struct PrefixEntry {
  FormulaKind kind;
  std::string var;
  Sort sort;
};

/// The leading chain of quantifiers.
std::vector<PrefixEntry> quantifier_prefix(const Formula& f);

/// Identical trees, variable names included.
bool structurally_equal(const Formula& a, const Formula& b);
bool structurally_equal(const Term& a, const Term& b);

/// Identical up to renaming of bound variables.
bool alpha_equivalent(const Formula& a, const Formula& b);

}  // namespace csw::formula
