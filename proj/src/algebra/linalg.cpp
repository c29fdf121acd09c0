#include "csw/algebra/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace csw::linalg {

double spectral_norm(const Matrix& m) {
  const auto n = m.rows();
  if (n == 1) return std::abs(m(0, 0));
  if (n == 2) {
    const double f = m.squaredNorm();
    const double det = std::abs(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
    const double disc = std::max(0.0, f * f - 4.0 * det * det);
    return std::sqrt(std::max(0.0, 0.5 * (f + std::sqrt(disc))));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.adjoint() * m, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

Matrix hermitian_from_params(std::span<const double> params, int n) {
  Matrix h(n, n);
  std::size_t k = 0;
  for (int i = 0; i < n; ++i) h(i, i) = params[k++];
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Complex z(params[k], params[k + 1]);
      k += 2;
      h(i, j) = z;
      h(j, i) = std::conj(z);
    }
  }
  return h;
}

Matrix expi_hermitian(const Matrix& h) {
  const auto n = h.rows();
  if (h.isZero(0.0)) return Matrix::Identity(n, n);
  if (n == 1) return Matrix::Constant(1, 1, std::polar(1.0, h(0, 0).real()));
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Matrix& v = es.eigenvectors();
  Eigen::VectorXcd phases(n);
  for (Eigen::Index i = 0; i < n; ++i) phases(i) = std::polar(1.0, es.eigenvalues()(i));
  return v * phases.asDiagonal() * v.adjoint();
}

HermitianExponential::HermitianExponential(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  vectors_ = es.eigenvectors();
  values_ = es.eigenvalues();
}

Matrix HermitianExponential::at(double t) const {
  Eigen::VectorXcd phases(values_.size());
  for (Eigen::Index i = 0; i < values_.size(); ++i) phases(i) = std::polar(1.0, t * values_(i));
  return vectors_ * phases.asDiagonal() * vectors_.adjoint();
}

Matrix range_frame(const Matrix& projection, int rank) {
  const auto n = projection.rows();
  Matrix frame(n, rank);
  Matrix residual = projection;
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (int k = 0; k < rank; ++k) {
    // Column pivoting: take the column with the largest residual, lowest index on ties.
    Eigen::Index best = -1;
    double best_norm = -1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      const double nj = residual.col(j).norm();
      if (nj > best_norm + 1e-12) {
        best_norm = nj;
        best = j;
      }
    }
    used[static_cast<std::size_t>(best)] = true;
    Eigen::VectorXcd v = residual.col(best);
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i < k; ++i) v -= frame.col(i) * frame.col(i).dot(v);
    }
    v /= v.norm();
    frame.col(k) = v;
    for (Eigen::Index j = 0; j < n; ++j) residual.col(j) -= v * v.dot(residual.col(j));
  }
  return frame;
}

Matrix complement_frame(const Matrix& projection, int rank) {
  const auto n = projection.rows();
  const Matrix complement = Matrix::Identity(n, n) - projection;
  return range_frame(complement, static_cast<int>(n) - rank);
}

}  // namespace csw::linalg
