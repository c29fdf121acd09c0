#include "csw/structure/trace.hpp"

#include <algorithm>
#include <numeric>

#include <limits>

namespace csw {

Rational make_rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw ValidationError("zero denominator");
  if (den < 0) num = -num, den = -den;
  const std::int64_t g = std::gcd(num, den);
  return g == 0 ? Rational{0, 1} : Rational{num / g, den / g};
}

MvnRelation MvnOracle::compare(const Element& a, const Element& b) {
  ++calls_;
  return mvn_compare(a, b).relation;
}

Rational trace_from_comparisons(const Element& p, int d, const BlockShape& shape, ComparisonOracle& oracle) {
  if (d < 1) throw ValidationError("depth must be >= 1, got " + std::to_string(d));
  // The unit: a 1/d'-th part of I, nonzero because d' <= max block.
  const int dd = std::max(2, std::min(d, shape.max_block()));
  std::vector<int> k(shape.num_blocks());
  for (std::size_t i = 0; i < k.size(); ++i) k[i] = shape.max_block() == 1 ? 1 : shape.block(i) / dd;
  // Copies j = 0..copies-1 of the unit sit on consecutive diagonal ranges.
  int copies = std::numeric_limits<int>::max();
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] > 0) copies = std::min(copies, shape.block(i) / k[i]);
  }
  auto first_copies = [&](int m) {
    RankTuple r;
    for (std::size_t i = 0; i < k.size(); ++i) r.ranks.push_back(k[i] * m);
    return Element::diagonal_projection(shape, r);
  };
  auto fits = [&](const Element& sum, const Element& target) {
    const MvnRelation rel = oracle.compare(sum, target);
    return rel == MvnRelation::Equivalent || rel == MvnRelation::PStrictlyBelow;
  };
  // Subequivalence to a fixed target is monotone in m: binary search.
  auto count = [&](const Element& target) {
    int lo = 0, hi = copies;
    while (lo < hi) {
      const int mid = (lo + hi + 1) / 2;
      if (fits(first_copies(mid), target)) {
        lo = mid;
      } else {
        hi = mid - 1;
      }
    }
    return lo;
  };
  const int under_p = count(p);
  const int under_one = count(Element::identity(shape));
  return make_rational(under_p, under_one);
}

Rational trace_from_comparisons(const Element& p, int d, const BlockShape& shape) {
  MvnOracle oracle;
  return trace_from_comparisons(p, d, shape, oracle);
}

}  // namespace csw
