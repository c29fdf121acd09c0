#pragma once

#include <span>

#include "csw/algebra/element.hpp"

// Dense helpers shared by the algebra, evaluator and structure modules.
namespace csw::linalg {

/// Largest singular value of a square block.
double spectral_norm(const Matrix& m);

/// Hermitian n x n matrix from n*n reals: the diagonal, then (re, im) of
/// each strictly upper entry in row-major order.
Matrix hermitian_from_params(std::span<const double> params, int n);

/// exp(iH) for hermitian H. Returns the identity exactly when H == 0.
Matrix expi_hermitian(const Matrix& h);

/// exp(i t H) for hermitian H, via a precomputed eigen-decomposition.
class HermitianExponential {
 public:
  explicit HermitianExponential(const Matrix& h);
  Matrix at(double t) const;

 private:
  Matrix vectors_;
  Eigen::VectorXd values_;
};

/// Orthonormal basis (as columns) of the range of a projection block,
/// obtained by Gram-Schmidt over its columns in order. For diagonal
/// projections this returns standard basis vectors with their signs.
Matrix range_frame(const Matrix& projection, int rank);

/// Orthonormal basis of the orthogonal complement of the range of a projection.
Matrix complement_frame(const Matrix& projection, int rank);

}  // namespace csw::linalg
