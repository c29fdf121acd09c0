#pragma once

#include <optional>
#include <string>

#include "csw/algebra/element.hpp"

namespace csw {

enum class MvnRelation { Equivalent, PStrictlyBelow, QStrictlyBelow, Incomparable };

/// "equivalent", "p<q", "q<p" or "incomparable".
std::string to_string(MvnRelation r);

struct MvnComparison {
  MvnRelation relation = MvnRelation::Incomparable;
  /// v with v*v = p and vv* <= q, when p is subequivalent to q.
  std::optional<Element> p_into_q;
  /// w with w*w = q and ww* <= p, when q is subequivalent to p.
  std::optional<Element> q_into_p;
};

/// A minimal projection below q: rank one in the first block where q is
/// nonzero, spanned by the first vector of q's range frame there. Throws
/// ValidationError if q is not a projection or is zero.
Element minimal_projection_under(const Element& q, const Tolerance& tol = {});

/// Murray-von Neumann comparison by the componentwise order of rank tuples,
/// with partial isometries built blockwise from range frames.
MvnComparison mvn_compare(const Element& p, const Element& q, const Tolerance& tol = {});

/// True iff every extremal trace (one per block) is strictly smaller on q
/// than on p.
bool strict_comparison(const Element& p, const Element& q, const Tolerance& tol = {});

/// Unitary u = v + w with u p u* = q, where w maps the complement of p onto
/// the complement of q. Requires v*v = p and vv* = q within eps_class.
Element mvn_to_unitary(const Element& p, const Element& q, const Element& v, const Tolerance& tol = {});

}  // namespace csw
