#include "csw/structure/unitary.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "csw/algebra/linalg.hpp"

namespace csw {

Element unitary_log(const Element& u, const Tolerance& tol) {
  if (!classify(u, tol).unitary) throw ValidationError("unitary_log needs a unitary element");
  std::vector<Matrix> blocks;
  for (std::size_t i = 0; i < u.num_blocks(); ++i) {
    const Matrix& ui = u.block(i);
    if (ui.isIdentity(0.0)) {
      blocks.push_back(Matrix::Zero(ui.rows(), ui.cols()));
      continue;
    }
    // A unitary is normal, so its Schur form is diagonal.
    Eigen::ComplexSchur<Matrix> schur(ui);
    const Matrix& q = schur.matrixU();
    const Matrix& t = schur.matrixT();
    Eigen::VectorXcd phase(ui.rows());
    for (int j = 0; j < ui.rows(); ++j) {
      double theta = std::arg(t(j, j));
      if (theta <= -std::numbers::pi) theta = std::numbers::pi;
      phase(j) = theta;
    }
    Matrix h = q * phase.asDiagonal() * q.adjoint();
    blocks.push_back((h + h.adjoint()) / 2.0);
  }
  Element h(u.shape(), std::move(blocks));
  if (distance(homotopy_path(h, 1.0), u) > 1e-9) throw std::runtime_error("unitary_log round trip exceeds 1e-9");
  return h;
}

Element homotopy_path(const Element& h, double t) {
  std::vector<Matrix> blocks;
  for (std::size_t i = 0; i < h.num_blocks(); ++i) blocks.push_back(linalg::expi_hermitian(t * h.block(i)));
  return Element(h.shape(), std::move(blocks));
}

}  // namespace csw
