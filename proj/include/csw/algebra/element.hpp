#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "csw/algebra/shape.hpp"
#include "csw/algebra/tolerance.hpp"

namespace csw {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Per-block ranks of a projection: its Murray-von Neumann class and K0 datum.
struct RankTuple {
  std::vector<int> ranks;

  bool is_zero() const;
  /// Componentwise order.
  bool leq(const RankTuple& other) const;
  friend bool operator==(const RankTuple&, const RankTuple&) = default;
};

/// An element of a finite-dimensional C*-algebra: one complex n_i x n_i
/// matrix per block of its shape.
class Element {
 public:
  Element(BlockShape shape, std::vector<Matrix> blocks);

  static Element zero(const BlockShape& shape);
  static Element identity(const BlockShape& shape);
  static Element scalar(const BlockShape& shape, Complex c);
  /// Matrix unit e_{row,col} inside block `block`, zero elsewhere.
  static Element matrix_unit(const BlockShape& shape, std::size_t block, int row, int col);
  /// Diagonal projection whose block i is diag(1,...,1,0,...,0) with ranks[i] ones.
  static Element diagonal_projection(const BlockShape& shape, const RankTuple& ranks);

  const BlockShape& shape() const { return shape_; }
  std::size_t num_blocks() const { return blocks_.size(); }
  const Matrix& block(std::size_t i) const { return blocks_[i]; }
  Matrix& block(std::size_t i) { return blocks_[i]; }
  std::span<const Matrix> blocks() const { return blocks_; }

  Element adjoint() const;

  Element& operator+=(const Element& other);
  Element& operator-=(const Element& other);
  Element& operator*=(Complex c);

  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator*(const Element& a, const Element& b);
  friend Element operator*(Complex c, Element a) { return a *= c; }

 private:
  BlockShape shape_;
  std::vector<Matrix> blocks_;
};

/// Operator norm: the largest singular value over all blocks.
double op_norm(const Element& a);

/// sup_i ||a_i - b_i|| without materialising the difference.
double distance(const Element& a, const Element& b);

/// Weights n_i / sum_j n_j: the trace inherited from M_{sum n_j}.
std::vector<double> default_trace_weights(const BlockShape& shape);

/// sum_i w_i Tr(a_i)/n_i. Weights must have one entry per block, be
/// nonnegative and sum to 1 within `tol.eps_num`.
Complex normalized_trace(const Element& a, std::optional<std::span<const double>> weights = std::nullopt,
                         const Tolerance& tol = {});

/// The extremal trace Tr(a_i)/n_i of block i.
Complex block_trace(const Element& a, std::size_t block);

struct Classification {
  bool self_adjoint = false;
  bool positive = false;
  bool projection = false;
  bool unitary = false;
  bool partial_isometry = false;
  bool central = false;
};

Classification classify(const Element& a, const Tolerance& tol = {});

/// Per-block rank by counting eigenvalues above 1/2. Throws ValidationError
/// unless `p` classifies as a projection.
RankTuple rank_tuple(const Element& p, const Tolerance& tol = {});

/// Nearest projection: spectral thresholding of the hermitian part at 1/2.
Element snap_to_projection(const Element& a);

/// Shape of the corner p A p: the nonzero ranks of p, zero-rank blocks dropped.
/// Throws ValidationError if p is not a projection of `a`, or is zero.
BlockShape corner(const BlockShape& a, const Element& p, const Tolerance& tol = {});

}  // namespace csw
