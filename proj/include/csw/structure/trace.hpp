#pragma once

#include <cstdint>

#include "csw/structure/comparison.hpp"

namespace csw {

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Reduced num/den with den > 0.
Rational make_rational(std::int64_t num, std::int64_t den);

/// The only access trace_from_comparisons has to the projection it measures.
class ComparisonOracle {
 public:
  virtual ~ComparisonOracle() = default;
  virtual MvnRelation compare(const Element& a, const Element& b) = 0;
};

/// mvn_compare, counting calls.
class MvnOracle : public ComparisonOracle {
 public:
  MvnRelation compare(const Element& a, const Element& b) override;
  int calls() const { return calls_; }

 private:
  int calls_ = 0;
};

/// Trace of p (default weights) recovered from comparisons alone. The unit e
/// is a 1/d-th part of the identity from decompose_identity (a minimal
/// diagonal projection when d exceeds every block), and the estimate is
///   (copies of e fitting under p) / (copies of e fitting under I),
/// each count found by comparing p, or I, with sums of orthogonal diagonal
/// copies of e. On a matrix algebra the error is below 1/d.
/// Throws ValidationError if d < 1.
Rational trace_from_comparisons(const Element& p, int d, const BlockShape& shape, ComparisonOracle& oracle);
Rational trace_from_comparisons(const Element& p, int d, const BlockShape& shape);

}  // namespace csw
