#include "csw/structure/dixmier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "csw/algebra/io.hpp"

namespace csw {

namespace {

constexpr int kMaxIterativeSteps = 200;
constexpr double kIterativeStop = 1e-12;

bool is_scalar_block(const Matrix& m) {
  const Complex c = m.trace() / static_cast<double>(m.rows());
  return (m - c * Matrix::Identity(m.rows(), m.cols())).norm() == 0.0;
}

// Unit v in span(e1, e2) with v* b v = t, for t on the segment [b11, b22].
// v = (cos th, e^{i ph} sin th) gives
//   b11 + sin^2 th d + sin th cos th X(ph),  X(ph) = b12 e^{i ph} + b21 e^{-i ph},
// with d = b22 - b11. Choose ph so X is a real multiple of d, then th by
// bisection on [0, pi/2].
Eigen::Vector2cd point_in_range(const Eigen::Matrix2cd& b, Complex t) {
  const Complex d = b(1, 1) - b(0, 0);
  if (std::norm(d) == 0.0) return {1.0, 0.0};
  const double lambda = std::clamp(((t - b(0, 0)) * std::conj(d)).real() / std::norm(d), 0.0, 1.0);
  const Complex p = b(0, 1) * std::conj(d), q = b(1, 0) * std::conj(d);
  const double phi = std::atan2(-(p.imag() + q.imag()), p.real() - q.real());
  const Complex e = std::polar(1.0, phi);
  const double rho = ((b(0, 1) * e + b(1, 0) * std::conj(e)) * std::conj(d)).real() / std::norm(d);
  auto f = [&](double th) { return std::sin(th) * std::sin(th) + std::sin(th) * std::cos(th) * rho - lambda; };
  double lo = 0.0, hi = std::numbers::pi / 2;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  const double th = 0.5 * (lo + hi);
  return {std::cos(th), e * std::sin(th)};
}

// Unit vector v with v* c v = 0 for a square c of trace zero. The diagonal
// entries average to 0, so 0 lies in a segment or triangle of them; the
// numerical range of each 2x2 compression is convex and contains its diagonal.
Eigen::VectorXcd null_vector_of_form(const Matrix& c) {
  const int m = static_cast<int>(c.rows());
  const Eigen::VectorXcd z = c.diagonal();
  auto basis = [m](int i) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(m);
    e(i) = 1.0;
    return e;
  };
  // Along a pair of orthonormal vectors, the unit combination with form t.
  auto along = [&](const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, Complex t) {
    Eigen::Matrix<Complex, Eigen::Dynamic, 2> f(m, 2);
    f << a, b;
    const Eigen::Matrix2cd comp = f.adjoint() * c * f;
    return Eigen::VectorXcd(f * point_in_range(comp, t));
  };
  int best_i = 0;
  for (int i = 1; i < m; ++i) {
    if (std::abs(z(i)) < std::abs(z(best_i))) best_i = i;
  }
  const double scale = std::max(1e-300, z.cwiseAbs().maxCoeff());
  if (std::abs(z(best_i)) <= 1e-15 * scale) return basis(best_i);
  auto cross = [](Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); };
  const double slack = 1e-12 * scale * scale;
  // Segments through 0.
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      if (std::abs(cross(z(i), z(j))) <= slack && (z(i) * std::conj(z(j))).real() <= 0.0) {
        return along(basis(i), basis(j), 0.0);
      }
    }
  }
  // Triangles containing 0: 0 = al z_i + be z_j + ga z_k.
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      for (int k = j + 1; k < m; ++k) {
        const double area = cross(z(j) - z(i), z(k) - z(i));
        if (area == 0.0) continue;
        const double al = cross(z(j), z(k)) / area, be = cross(z(k), z(i)) / area, ga = cross(z(i), z(j)) / area;
        if (al < -1e-12 || be < -1e-12 || ga < -1e-12) continue;
        const double ab = std::max(al + be, 1e-300);
        const Complex w = (al * z(i) + be * z(j)) / ab;
        const Eigen::VectorXcd u = along(basis(i), basis(j), w);
        return along(u, basis(k), 0.0);
      }
    }
  }
  return basis(best_i);
}

// Unitary v with diag(v* a v) = 0, for a of trace zero. Each step fixes one
// basis vector with zero form and recurses on its orthogonal complement.
Matrix zero_diagonal_basis(const Matrix& a) {
  const int n = static_cast<int>(a.rows());
  Matrix q = Matrix::Identity(n, n);
  Matrix c = a;
  for (int k = 0; k + 1 < n; ++k) {
    const int m = n - k;
    const Eigen::VectorXcd v = null_vector_of_form(c);
    const Matrix col = v;
    Eigen::HouseholderQR<Matrix> qr(col);
    const Matrix w = qr.householderQ();
    q.rightCols(m) = q.rightCols(m) * w;
    const Matrix cw = w.adjoint() * c * w;
    c = cw.bottomRightCorner(m - 1, m - 1);
  }
  return q;
}

// Unitaries u_0..u_{m-1} of one block whose uniform average of u x u* is
// (Tr x / n) I.
std::vector<Matrix> block_design(const Matrix& x) {
  const int n = static_cast<int>(x.rows());
  if (is_scalar_block(x)) return {Matrix::Identity(n, n)};
  Matrix shift = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) shift((j + 1) % n, j) = 1.0;
  std::vector<Matrix> out;
  const bool self_adjoint = (x - x.adjoint()).norm() == 0.0;
  Matrix w;
  bool normal = self_adjoint;
  if (self_adjoint) {
    w = Eigen::SelfAdjointEigenSolver<Matrix>(x).eigenvectors();
  } else {
    Eigen::ComplexSchur<Matrix> schur(x);
    const Matrix& t = schur.matrixT();
    const double off = (t - Matrix(t.diagonal().asDiagonal())).norm();
    normal = off <= 1e-13 * std::max(1.0, t.norm());
    w = schur.matrixU();
  }
  if (normal) {
    // x = w D w*: conjugating D by the n cyclic shifts averages its diagonal.
    Matrix s = Matrix::Identity(n, n);
    for (int j = 0; j < n; ++j) {
      out.push_back(w * s * w.adjoint());
      s = shift * s;
    }
    return out;
  }
  // Conjugating by the clock unitaries in a basis where x - tau I has zero
  // diagonal keeps only the diagonal, which is tau I.
  const Complex tau = x.trace() / static_cast<double>(n);
  const Matrix v = zero_diagonal_basis(x - tau * Matrix::Identity(n, n));
  Matrix clock = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) clock(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * j / n);
  Matrix c = Matrix::Identity(n, n);
  for (int j = 0; j < n; ++j) {
    out.push_back(v * c * v.adjoint());
    c = clock * c;
  }
  return out;
}

Element conjugate(const Element& u, const Element& x) { return u * x * u.adjoint(); }

DixmierResult exact_average(const Element& x) {
  DixmierResult r{center_valued_trace(x), {}, {}, {}};
  std::vector<std::vector<Matrix>> designs;
  bool central = true;
  for (std::size_t i = 0; i < x.num_blocks(); ++i) {
    designs.push_back(block_design(x.block(i)));
    central = central && designs.back().size() == 1;
  }
  if (central) return r;
  // Block i spreads weight 1/m_i over each of its m_i unitaries. Cutting
  // [0, 1) at every s/m_i gives a common refinement with at most sum m_i
  // pieces; each piece picks one unitary per block.
  struct Cut {
    std::int64_t s, m;
  };
  std::vector<Cut> cuts{{0, 1}, {1, 1}};
  for (const auto& d : designs) {
    const auto m = static_cast<std::int64_t>(d.size());
    for (std::int64_t s = 1; s < m; ++s) cuts.push_back({s, m});
  }
  auto less = [](const Cut& a, const Cut& b) { return a.s * b.m < b.s * a.m; };
  std::sort(cuts.begin(), cuts.end(), less);
  cuts.erase(std::unique(cuts.begin(), cuts.end(), [](const Cut& a, const Cut& b) { return a.s * b.m == b.s * a.m; }),
             cuts.end());
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double lo = static_cast<double>(cuts[c].s) / static_cast<double>(cuts[c].m);
    const double hi = static_cast<double>(cuts[c + 1].s) / static_cast<double>(cuts[c + 1].m);
    std::vector<Matrix> blocks;
    for (const auto& d : designs) {
      // Index of the piece of this block containing [lo, hi): floor(lo * m_i) exactly.
      const auto m = static_cast<std::int64_t>(d.size());
      const std::int64_t idx = (cuts[c].s * m) / cuts[c].m;
      blocks.push_back(d[static_cast<std::size_t>(idx)]);
    }
    r.transcript.push_back({Element(x.shape(), std::move(blocks)), hi - lo});
  }
  return r;
}

// Conjugation by the reversal of an eigenbasis of y pairs the j-th largest
// eigenvalue with the j-th smallest. With trace zero, a middle eigenvalue of
// an odd block of size n is at most (n-1)/(n+1) ||y||, so the step contracts
// by 3/4 for every block size up to 8.
Matrix reversal(const Matrix& y) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(y);
  const Matrix& w = es.eigenvectors();
  return w * w.rowwise().reverse().adjoint();
}

// Iterates on a self-adjoint x; errors[k] = ||x_k - z||.
void iterate(const Element& x, const Element& z, std::vector<DixmierTerm>& transcript, std::vector<double>& errors) {
  const double scale = std::max(1.0, op_norm(x));
  Element xk = x;
  double err = distance(xk, z);
  errors.push_back(err);
  for (int k = 0; k < kMaxIterativeSteps && err > kIterativeStop * scale; ++k) {
    const Element y = xk - z;
    std::vector<Matrix> blocks;
    for (std::size_t i = 0; i < y.num_blocks(); ++i) {
      const Matrix yi = (y.block(i) + y.block(i).adjoint()) / 2.0;
      blocks.push_back(yi.norm() == 0.0 ? Matrix::Identity(yi.rows(), yi.cols()) : reversal(yi));
    }
    Element u(x.shape(), std::move(blocks));
    xk = 0.5 * (xk + conjugate(u, xk));
    transcript.push_back({std::move(u), 0.5});
    err = distance(xk, z);
    errors.push_back(err);
  }
}

Element replay_steps(const Element& x, const std::vector<DixmierTerm>& t) {
  Element xk = x;
  for (const auto& s : t) xk = (1.0 - s.coefficient) * xk + s.coefficient * conjugate(s.unitary, xk);
  return xk;
}

}  // namespace

Element center_valued_trace(const Element& x) {
  std::vector<Matrix> blocks;
  for (std::size_t i = 0; i < x.num_blocks(); ++i) {
    const int n = x.shape().block(i);
    blocks.push_back(block_trace(x, i) * Matrix::Identity(n, n));
  }
  return Element(x.shape(), std::move(blocks));
}

DixmierResult dixmier_average(const Element& x, DixmierMode mode, const Tolerance& tol) {
  if (mode == DixmierMode::Exact) return exact_average(x);
  DixmierResult r{center_valued_trace(x), {}, {}, {}};
  if (classify(x, tol).self_adjoint) {
    const Element h = 0.5 * (x + x.adjoint());
    iterate(h, 0.5 * (r.center + r.center.adjoint()), r.transcript, r.errors);
    return r;
  }
  const Element h = 0.5 * (x + x.adjoint());
  const Element k = Complex(0.0, -0.5) * (x - x.adjoint());
  std::vector<double> eh, ek;
  iterate(h, center_valued_trace(h), r.transcript, eh);
  iterate(k, center_valued_trace(k), r.imaginary_transcript, ek);
  const std::size_t len = std::max(eh.size(), ek.size());
  for (std::size_t j = 0; j < len; ++j) {
    const double a = eh[std::min(j, eh.size() - 1)], b = ek[std::min(j, ek.size() - 1)];
    r.errors.push_back(std::max(a, b));
  }
  return r;
}

Element replay_dixmier(const Element& x, const DixmierResult& r, DixmierMode mode) {
  if (mode == DixmierMode::Exact) {
    if (r.transcript.empty()) return x;
    Element sum = Element::zero(x.shape());
    for (const auto& t : r.transcript) sum += t.coefficient * conjugate(t.unitary, x);
    return sum;
  }
  if (r.imaginary_transcript.empty() && r.transcript.empty()) return x;
  const Element h = 0.5 * (x + x.adjoint());
  const Element k = Complex(0.0, -0.5) * (x - x.adjoint());
  return replay_steps(h, r.transcript) + Complex(0.0, 1.0) * replay_steps(k, r.imaginary_transcript);
}

nlohmann::json dixmier_to_json(const DixmierResult& r) {
  auto terms = [](const std::vector<DixmierTerm>& t) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& s : t) a.push_back({{"unitary", element_to_json(s.unitary)}, {"coefficient", s.coefficient}});
    return a;
  };
  nlohmann::json j{{"center", element_to_json(r.center)}, {"transcript", terms(r.transcript)}, {"errors", r.errors}};
  if (!r.imaginary_transcript.empty()) j["imaginary_transcript"] = terms(r.imaginary_transcript);
  return j;
}

}  // namespace csw
