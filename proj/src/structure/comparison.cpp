#include "csw/structure/comparison.hpp"

#include <stdexcept>

#include "csw/algebra/linalg.hpp"

namespace csw {

namespace {

void require_projection(const Element& e, const Tolerance& tol, const char* what) {
  if (!classify(e, tol).projection) throw ValidationError(std::string(what) + " is not a projection");
}

void require_same_shape(const Element& a, const Element& b) {
  if (!(a.shape() == b.shape())) {
    throw ValidationError("shape mismatch: " + a.shape().to_string() + " vs " + b.shape().to_string());
  }
}

// v with v*v = p and vv* <= q, given rank(p_i) <= rank(q_i) in every block.
Element embed(const Element& p, const RankTuple& rp, const Element& q, const RankTuple& rq) {
  std::vector<Matrix> blocks;
  for (std::size_t i = 0; i < p.num_blocks(); ++i) {
    const int n = p.shape().block(i);
    const int r = rp.ranks[i];
    if (r == 0) {
      blocks.push_back(Matrix::Zero(n, n));
      continue;
    }
    const Matrix fp = linalg::range_frame(p.block(i), r);
    const Matrix fq = linalg::range_frame(q.block(i), rq.ranks[i]);
    blocks.push_back(fq.leftCols(r) * fp.adjoint());
  }
  return Element(p.shape(), std::move(blocks));
}

}  // namespace

std::string to_string(MvnRelation r) {
  switch (r) {
    case MvnRelation::Equivalent: return "equivalent";
    case MvnRelation::PStrictlyBelow: return "p<q";
    case MvnRelation::QStrictlyBelow: return "q<p";
    case MvnRelation::Incomparable: return "incomparable";
  }
  return "incomparable";
}

Element minimal_projection_under(const Element& q, const Tolerance& tol) {
  require_projection(q, tol, "q");
  const RankTuple r = rank_tuple(q, tol);
  if (r.is_zero()) throw ValidationError("the zero projection dominates no minimal projection");
  std::vector<Matrix> blocks;
  bool placed = false;
  for (std::size_t i = 0; i < q.num_blocks(); ++i) {
    const int n = q.shape().block(i);
    if (!placed && r.ranks[i] > 0) {
      const Matrix f = linalg::range_frame(q.block(i), r.ranks[i]).col(0);
      blocks.push_back(f * f.adjoint());
      placed = true;
    } else {
      blocks.push_back(Matrix::Zero(n, n));
    }
  }
  Element p(q.shape(), std::move(blocks));
  // Minimality: the corner p A p is one-dimensional.
  if (corner(q.shape(), p, tol).dimension() != 1) throw std::logic_error("corner of the minimal projection is not C");
  return p;
}

MvnComparison mvn_compare(const Element& p, const Element& q, const Tolerance& tol) {
  require_same_shape(p, q);
  require_projection(p, tol, "p");
  require_projection(q, tol, "q");
  const RankTuple rp = rank_tuple(p, tol);
  const RankTuple rq = rank_tuple(q, tol);
  MvnComparison out;
  const bool pq = rp.leq(rq), qp = rq.leq(rp);
  if (pq) out.p_into_q = embed(p, rp, q, rq);
  if (qp) out.q_into_p = embed(q, rq, p, rp);
  if (pq && qp) {
    out.relation = MvnRelation::Equivalent;
  } else if (pq) {
    out.relation = MvnRelation::PStrictlyBelow;
  } else if (qp) {
    out.relation = MvnRelation::QStrictlyBelow;
  } else {
    out.relation = MvnRelation::Incomparable;
  }
  return out;
}

bool strict_comparison(const Element& p, const Element& q, const Tolerance& tol) {
  require_same_shape(p, q);
  require_projection(p, tol, "p");
  require_projection(q, tol, "q");
  const RankTuple rp = rank_tuple(p, tol);
  const RankTuple rq = rank_tuple(q, tol);
  for (std::size_t i = 0; i < rp.ranks.size(); ++i) {
    if (!(rq.ranks[i] < rp.ranks[i])) return false;
  }
  return true;
}

Element mvn_to_unitary(const Element& p, const Element& q, const Element& v, const Tolerance& tol) {
  require_same_shape(p, q);
  require_same_shape(p, v);
  require_projection(p, tol, "p");
  require_projection(q, tol, "q");
  if (distance(v.adjoint() * v, p) > tol.eps_class) throw ValidationError("v*v differs from p");
  if (distance(v * v.adjoint(), q) > tol.eps_class) throw ValidationError("vv* differs from q");
  const RankTuple rp = rank_tuple(p, tol);
  const RankTuple rq = rank_tuple(q, tol);
  if (!(rp == rq)) throw ValidationError("p and q have different rank tuples");
  // Finite dimension: the complements have equal ranks, so a partial
  // isometry between them exists and completes v to a unitary.
  std::vector<Matrix> blocks;
  for (std::size_t i = 0; i < p.num_blocks(); ++i) {
    const Matrix fc = linalg::complement_frame(p.block(i), rp.ranks[i]);
    const Matrix gc = linalg::complement_frame(q.block(i), rq.ranks[i]);
    blocks.push_back(v.block(i) + gc * fc.adjoint());
  }
  Element u(p.shape(), std::move(blocks));
  if (!classify(u, tol).unitary) throw ValidationError("v is too far from a partial isometry to complete");
  return u;
}

}  // namespace csw
