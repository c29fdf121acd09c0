#pragma once

// Independent reference computations for tests. Nothing here calls into the
// library's own linear algebra helpers.

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "csw/algebra/element.hpp"

namespace oracle {

using csw::BlockShape;
using csw::Complex;
using csw::Element;
using csw::Matrix;

inline Matrix gaussian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

inline Element random_element(const BlockShape& s, std::mt19937_64& rng) {
  std::vector<Matrix> b;
  for (int n : s.blocks()) b.push_back(gaussian(n, rng));
  return Element(s, std::move(b));
}

inline Element random_contraction(const BlockShape& s, std::mt19937_64& rng) {
  Element a = random_element(s, rng);
  double nrm = 0.0;
  for (const auto& m : a.blocks()) nrm = std::max(nrm, Eigen::JacobiSVD<Matrix>(m).singularValues()(0));
  return Complex(1.0 / nrm) * a;
}

inline Element random_self_adjoint(const BlockShape& s, std::mt19937_64& rng) {
  Element a = random_element(s, rng);
  return Complex(0.5) * (a + a.adjoint());
}

// Haar unitary: QR of a complex Ginibre matrix with the phases of R fixed.
inline Matrix haar(int n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Matrix> qr(gaussian(n, rng));
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    q.col(j) *= std::abs(d) > 0 ? d / std::abs(d) : Complex(1.0);
  }
  return q;
}

inline Element haar_unitary(const BlockShape& s, std::mt19937_64& rng) {
  std::vector<Matrix> b;
  for (int n : s.blocks()) b.push_back(haar(n, rng));
  return Element(s, std::move(b));
}

// u diag(1..1,0..0) u* per block with Haar u.
inline Element random_projection(const BlockShape& s, const std::vector<int>& ranks, std::mt19937_64& rng) {
  std::vector<Matrix> b;
  for (std::size_t i = 0; i < s.num_blocks(); ++i) {
    const int n = s.block(i);
    Matrix q = haar(n, rng);
    Matrix p = q.leftCols(ranks[i]) * q.leftCols(ranks[i]).adjoint();
    b.push_back(p);
  }
  return Element(s, std::move(b));
}

inline double svd_norm(const Matrix& m) { return Eigen::JacobiSVD<Matrix>(m).singularValues()(0); }

inline double svd_norm(const Element& a) {
  double best = 0.0;
  for (const auto& m : a.blocks()) best = std::max(best, svd_norm(m));
  return best;
}

// Integer partitions of total into parts ≤ max_part, by the standard recurrence.
inline long long partition_count(int total, int max_part) {
  if (total == 0) return 1;
  if (total < 0 || max_part == 0) return 0;
  return partition_count(total - max_part, max_part) + partition_count(total, max_part - 1);
}

inline long long partitions_up_to(int total) {
  long long c = 0;
  for (int t = 1; t <= total; ++t) c += partition_count(t, t);
  return c;
}

}  // namespace oracle
