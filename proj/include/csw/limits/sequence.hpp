#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "csw/algebra/shape.hpp"

namespace csw {

/// Integer sequence n_i over i = first..last:
///   n=a..b             n_i = a + i - 1 for i = 1..b-a+1
///   n=EXPR[,i=a..b]    EXPR affine in i (3*i+1, 2i-1, i, 7); default i=1..20
class IntegerRule {
 public:
  static IntegerRule parse(std::string_view text);
  /// n_i = slope * i + offset.
  IntegerRule(std::int64_t slope, std::int64_t offset, int first, int last);
  std::int64_t at(int i) const { return slope_ * i + offset_; }
  int first() const { return first_; }
  int last() const { return last_; }
  std::string to_string() const;

 private:
  std::int64_t slope_, offset_;
  int first_, last_;
};

/// Shapes A_i over i = 1..size(). Rules:
///   an IntegerRule          M_{n_i}
///   const=SHAPE[,i=a..b]    the same shape at every index
///   R1|R2|...               interleaving: index i takes the ceil(i/k)-th
///                           shape of rule ((i-1) mod k)
struct AlgebraSequence {
  std::function<BlockShape(int)> generator;
  int size = 0;
  std::string description;

  static AlgebraSequence parse(std::string_view rule);
  static AlgebraSequence matrices(const IntegerRule& n);
  static AlgebraSequence constant(const BlockShape& shape, int size);
  BlockShape at(int i) const;
};

}  // namespace csw
