#pragma once

#include <random>
#include <span>
#include <variant>
#include <vector>

#include "csw/algebra/element.hpp"
#include "csw/formula/ast.hpp"

namespace csw {

/// A point of a sort: a scalar for disk and interval sorts, else an Element.
using Value = std::variant<Complex, Element>;

/// Parameterization of a sort on a shape as a finite list of branches, each
/// a smooth map from R^dim onto one piece of the definable set:
///
///   ball          b -> b / max(1, ||b||)                    2 n_i^2 reals
///   sa_ball       hermitian part, same retraction           n_i^2
///   pos_ball      b*b, same retraction                      2 n_i^2
///   unitary       exp(iH)                                   n_i^2
///   proj*         per rank tuple r: range of an n_i x m_i    2 n_i m_i where 0<r_i<n_i,
///                 frame, or its complement                  m_i = min(r_i, n_i - r_i)
///   proj_central  per 0/1 block indicator                   none
///   pisom         per rank tuple r: u1 q_r u2               2 n_i^2, n_i^2 when r_i=n_i
///   disk          polar (rho, theta), r = min(1,|rho|)      2
///   interval      clamp to [lo, hi]                         1
///
/// Branches are rank tuples in lexicographic order. A sort with no branches
/// is empty on the shape (proj_nt on M_1).
class SortChart {
 public:
  SortChart(const formula::Sort& sort, const BlockShape& shape);

  const formula::Sort& sort() const { return sort_; }
  const BlockShape& shape() const { return shape_; }
  std::size_t num_branches() const { return branches_.size(); }
  bool empty() const { return branches_.empty(); }
  int dimension(std::size_t branch) const { return branches_[branch].dim; }
  int max_dimension() const;
  /// Rank tuple of a projection or partial-isometry branch.
  const RankTuple& ranks(std::size_t branch) const { return branches_[branch].ranks; }

  Value point(std::size_t branch, std::span<const double> params) const;
  /// Parameters mapping to the branch's distinguished point: I for balls and
  /// unitaries, the diagonal projection q_r, the scalar 0 or lo.
  void anchor(std::size_t branch, std::span<double> out) const;
  void random(std::size_t branch, std::mt19937_64& rng, std::span<double> out) const;

 private:
  struct Branch {
    RankTuple ranks;
    int dim = 0;
  };
  formula::Sort sort_;
  BlockShape shape_;
  std::vector<Branch> branches_;
};

/// A random point of the sort: a uniformly chosen branch at random parameters.
/// Throws ValidationError if the sort is empty on the shape.
Value sample_sort(const formula::Sort& sort, const BlockShape& shape, std::mt19937_64& rng);

}  // namespace csw
