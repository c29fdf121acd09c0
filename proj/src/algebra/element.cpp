#include "csw/algebra/element.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "csw/algebra/linalg.hpp"

namespace csw {

bool RankTuple::is_zero() const {
  return std::all_of(ranks.begin(), ranks.end(), [](int r) { return r == 0; });
}

bool RankTuple::leq(const RankTuple& other) const {
  if (ranks.size() != other.ranks.size()) return false;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    if (ranks[i] > other.ranks[i]) return false;
  }
  return true;
}

Element::Element(BlockShape shape, std::vector<Matrix> blocks) : shape_(std::move(shape)), blocks_(std::move(blocks)) {
  if (blocks_.size() != shape_.num_blocks()) {
    throw ValidationError("element has " + std::to_string(blocks_.size()) + " blocks, shape " + shape_.to_string() +
                          " needs " + std::to_string(shape_.num_blocks()));
  }
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const int n = shape_.block(i);
    if (blocks_[i].rows() != n || blocks_[i].cols() != n) {
      throw ValidationError("block " + std::to_string(i) + " must be " + std::to_string(n) + "x" + std::to_string(n));
    }
  }
}

Element Element::zero(const BlockShape& shape) { return scalar(shape, 0.0); }

Element Element::identity(const BlockShape& shape) { return scalar(shape, 1.0); }

Element Element::scalar(const BlockShape& shape, Complex c) {
  std::vector<Matrix> blocks;
  blocks.reserve(shape.num_blocks());
  for (int n : shape.blocks()) blocks.push_back(c * Matrix::Identity(n, n));
  return Element(shape, std::move(blocks));
}

Element Element::matrix_unit(const BlockShape& shape, std::size_t block, int row, int col) {
  Element e = zero(shape);
  e.blocks_.at(block)(row, col) = 1.0;
  return e;
}

Element Element::diagonal_projection(const BlockShape& shape, const RankTuple& ranks) {
  if (ranks.ranks.size() != shape.num_blocks()) throw ValidationError("rank tuple length does not match shape");
  Element p = zero(shape);
  for (std::size_t i = 0; i < shape.num_blocks(); ++i) {
    const int r = ranks.ranks[i];
    if (r < 0 || r > shape.block(i)) throw ValidationError("rank exceeds block size");
    for (int j = 0; j < r; ++j) p.blocks_[i](j, j) = 1.0;
  }
  return p;
}

Element Element::adjoint() const {
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (const auto& b : blocks_) blocks.push_back(b.adjoint());
  return Element(shape_, std::move(blocks));
}

Element& Element::operator+=(const Element& other) {
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] += other.blocks_[i];
  return *this;
}

Element& Element::operator-=(const Element& other) {
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] -= other.blocks_[i];
  return *this;
}

Element& Element::operator*=(Complex c) {
  for (auto& b : blocks_) b *= c;
  return *this;
}

Element operator*(const Element& a, const Element& b) {
  std::vector<Matrix> blocks;
  blocks.reserve(a.blocks_.size());
  for (std::size_t i = 0; i < a.blocks_.size(); ++i) blocks.push_back(a.blocks_[i] * b.blocks_[i]);
  return Element(a.shape_, std::move(blocks));
}

double op_norm(const Element& a) {
  double best = 0.0;
  for (const auto& b : a.blocks()) best = std::max(best, linalg::spectral_norm(b));
  return best;
}

double distance(const Element& a, const Element& b) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.num_blocks(); ++i) {
    best = std::max(best, linalg::spectral_norm(a.block(i) - b.block(i)));
  }
  return best;
}

std::vector<double> default_trace_weights(const BlockShape& shape) {
  std::vector<double> w;
  w.reserve(shape.num_blocks());
  const double total = shape.matrix_size();
  for (int n : shape.blocks()) w.push_back(n / total);
  return w;
}

Complex block_trace(const Element& a, std::size_t block) {
  return a.block(block).trace() / static_cast<double>(a.shape().block(block));
}

Complex normalized_trace(const Element& a, std::optional<std::span<const double>> weights, const Tolerance& tol) {
  std::vector<double> defaults;
  std::span<const double> w;
  if (weights) {
    w = *weights;
    if (w.size() != a.num_blocks()) {
      throw ValidationError("trace weights need " + std::to_string(a.num_blocks()) + " entries");
    }
    double sum = 0.0;
    for (double x : w) {
      if (x < 0.0) throw ValidationError("trace weights must be nonnegative");
      sum += x;
    }
    if (std::abs(sum - 1.0) > tol.eps_num) throw ValidationError("trace weights must sum to 1");
  } else {
    defaults = default_trace_weights(a.shape());
    w = defaults;
  }
  Complex t = 0.0;
  for (std::size_t i = 0; i < a.num_blocks(); ++i) t += w[i] * block_trace(a, i);
  return t;
}

Classification classify(const Element& a, const Tolerance& tol) {
  const double eps = tol.eps_class;
  const Element star = a.adjoint();
  const Element id = Element::identity(a.shape());
  Classification c;

  const double sa_defect = distance(star, a);
  c.self_adjoint = sa_defect <= eps;
  if (c.self_adjoint) {
    double min_eig = 0.0;
    for (const auto& b : a.blocks()) {
      const Matrix h = 0.5 * (b + b.adjoint());
      Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
      min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
    }
    c.positive = min_eig >= -eps;
  }
  c.projection = distance(a * a, a) + sa_defect <= eps;
  c.unitary = distance(star * a, id) + distance(a * star, id) <= eps;
  c.partial_isometry = distance(a * star * a, a) <= eps;

  // Central iff the element commutes with every matrix unit of every block.
  c.central = true;
  for (std::size_t i = 0; i < a.num_blocks() && c.central; ++i) {
    const Matrix& b = a.block(i);
    const auto n = b.rows();
    for (Eigen::Index j = 0; j < n && c.central; ++j) {
      for (Eigen::Index k = 0; k < n && c.central; ++k) {
        Matrix e = Matrix::Zero(n, n);
        e(j, k) = 1.0;
        if (linalg::spectral_norm(b * e - e * b) > eps) c.central = false;
      }
    }
  }
  return c;
}

RankTuple rank_tuple(const Element& p, const Tolerance& tol) {
  if (!classify(p, tol).projection) throw ValidationError("rank_tuple expects a projection");
  RankTuple r;
  r.ranks.reserve(p.num_blocks());
  for (const auto& b : p.blocks()) {
    const Matrix h = 0.5 * (b + b.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    r.ranks.push_back(static_cast<int>((es.eigenvalues().array() > 0.5).count()));
  }
  return r;
}

Element snap_to_projection(const Element& a) {
  std::vector<Matrix> blocks;
  blocks.reserve(a.num_blocks());
  for (const auto& b : a.blocks()) {
    const Matrix h = 0.5 * (b + b.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Matrix p = Matrix::Zero(b.rows(), b.cols());
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
      if (es.eigenvalues()(i) > 0.5) p += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    }
    blocks.push_back(std::move(p));
  }
  return Element(a.shape(), std::move(blocks));
}

BlockShape corner(const BlockShape& a, const Element& p, const Tolerance& tol) {
  if (!(p.shape() == a)) throw ValidationError("projection does not belong to shape " + a.to_string());
  const RankTuple r = rank_tuple(p, tol);
  std::vector<int> blocks;
  for (int rank : r.ranks) {
    if (rank > 0) blocks.push_back(rank);
  }
  if (blocks.empty()) throw ValidationError("the corner of the zero projection is the zero algebra");
  return BlockShape(std::move(blocks));
}

}  // namespace csw
