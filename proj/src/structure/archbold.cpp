#include "csw/structure/archbold.hpp"

#include <cmath>
#include <random>

#include "csw/algebra/linalg.hpp"
#include "csw/evaluator/evaluate.hpp"
#include "csw/formula/parser.hpp"

namespace csw {

namespace {

constexpr int kGoldenIterations = 60;
const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;

template <class F>
double golden_min(double lo, double hi, F&& f, double* argmin) {
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a), d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < kGoldenIterations; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  const double x = (a + b) / 2.0;
  const double fx = f(x);
  double best = fx, arg = x;
  for (auto [p, fp] : {std::pair{lo, f(lo)}, std::pair{hi, f(hi)}}) {
    if (fp < best) best = fp, arg = p;
  }
  if (argmin) *argmin = arg;
  return best;
}

// min over lambda of ||m - lambda I||, a convex function of lambda. The
// minimizer lies in the numerical range, inside the box of the spectra of
// the real and imaginary parts.
double block_distance(const Matrix& m, Complex* centre) {
  const int n = static_cast<int>(m.rows());
  const Matrix re = (m + m.adjoint()) / 2.0;
  const Matrix im = (m - m.adjoint()) / Complex(0.0, 2.0);
  Eigen::SelfAdjointEigenSolver<Matrix> sre(re, Eigen::EigenvaluesOnly), sim(im, Eigen::EigenvaluesOnly);
  const double re_lo = sre.eigenvalues()(0), re_hi = sre.eigenvalues()(n - 1);
  const double im_lo = sim.eigenvalues()(0), im_hi = sim.eigenvalues()(n - 1);
  if ((m - m.adjoint()).norm() == 0.0) {
    // Self-adjoint: the Chebyshev centre of the spectrum.
    *centre = (re_lo + re_hi) / 2.0;
    return (re_hi - re_lo) / 2.0;
  }
  auto f = [&](double x, double y) {
    return linalg::spectral_norm(m - Complex(x, y) * Matrix::Identity(n, n));
  };
  double best_y = 0.0;
  auto inner = [&](double x) {
    return golden_min(im_lo, im_hi, [&](double y) { return f(x, y); }, nullptr);
  };
  double best_x = 0.0;
  const double d = golden_min(re_lo, re_hi, inner, &best_x);
  golden_min(im_lo, im_hi, [&](double y) { return f(best_x, y); }, &best_y);
  *centre = Complex(best_x, best_y);
  return d;
}

constexpr int kPowerSteps = 500;

Matrix polar_factor(const Matrix& g) {
  Eigen::JacobiSVD<Matrix> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

// sup over the ball of ||a x - x a|| for one block. The objective is convex,
// so moving to the maximizer of its linearization, the polar factor of the
// subgradient a* u v* - u v* a* at the top singular pair (u, v), never
// decreases it.
double block_derivation_norm(const Matrix& a, int starts, std::mt19937_64& rng) {
  const int n = static_cast<int>(a.rows());
  if (n == 1) return 0.0;
  std::normal_distribution<double> g;
  double best = 0.0;
  for (int s = 0; s < starts; ++s) {
    Matrix x(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) x(i, j) = Complex(g(rng), g(rng));
    x = polar_factor(x);
    double f = 0.0;
    for (int it = 0; it < kPowerSteps; ++it) {
      const Matrix d = a * x - x * a;
      Eigen::JacobiSVD<Matrix> svd(d, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const double fx = svd.singularValues()(0);
      if (it > 0 && fx <= f * (1.0 + 1e-15)) {
        f = std::max(f, fx);
        break;
      }
      f = fx;
      const Matrix uv = svd.matrixU().col(0) * svd.matrixV().col(0).adjoint();
      x = polar_factor(a.adjoint() * uv - uv * a.adjoint());
    }
    best = std::max(best, f);
  }
  return best;
}

}  // namespace

double distance_to_center(const Element& a, Element* nearest) {
  double d = 0.0;
  std::vector<Matrix> blocks;
  for (std::size_t i = 0; i < a.num_blocks(); ++i) {
    Complex c;
    d = std::max(d, block_distance(a.block(i), &c));
    const int n = a.shape().block(i);
    blocks.push_back(c * Matrix::Identity(n, n));
  }
  if (nearest) *nearest = Element(a.shape(), std::move(blocks));
  return d;
}

ArchboldConstants archbold_constants(const Element& a, const EvalConfig& cfg) {
  ArchboldConstants out{0.0, 0.0, Element::zero(a.shape())};
  out.dist_to_center = distance_to_center(a, &out.nearest_central);
  static const formula::FormulaPtr derivation = formula::parse_open("sup x:ball . norm(a*x - x*a)", {"a"});
  out.derivation_norm =
      evaluate_at(*derivation, a.shape(), {Witness{"a", formula::Sort::of(formula::SortKind::Ball), a}}, cfg);
  std::mt19937_64 rng(cfg.seed);
  for (std::size_t i = 0; i < a.num_blocks(); ++i) {
    out.derivation_norm = std::max(out.derivation_norm, block_derivation_norm(a.block(i), cfg.restarts, rng));
  }
  return out;
}

}  // namespace csw
