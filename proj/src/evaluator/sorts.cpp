#include "csw/evaluator/sorts.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "csw/algebra/linalg.hpp"

namespace csw {

using formula::SortKind;

namespace {

// All tuples 0 ≤ r_i ≤ n_i, last block varying fastest.
std::vector<RankTuple> all_rank_tuples(const BlockShape& s) {
  std::vector<RankTuple> out;
  RankTuple r{std::vector<int>(s.num_blocks(), 0)};
  for (;;) {
    out.push_back(r);
    std::size_t i = s.num_blocks();
    while (i > 0) {
      --i;
      if (r.ranks[i] < s.block(i)) {
        ++r.ranks[i];
        break;
      }
      r.ranks[i] = 0;
      if (i == 0) return out;
    }
    if (s.num_blocks() == 0) return out;
  }
}

Matrix unitary_block(std::span<const double> p, int n) { return linalg::expi_hermitian(linalg::hermitian_from_params(p, n)); }

Matrix diag_projection(int n, int r) {
  Matrix q = Matrix::Zero(n, n);
  for (int j = 0; j < r; ++j) q(j, j) = 1.0;
  return q;
}

// Rank-r projection from an n x m frame, m = min(r, n-r): the range of
// F = E + P for r <= n/2, else the complement of that range, where E holds
// the unit vectors making P = 0 the diagonal projection onto the first r.
Matrix frame_projection(std::span<const double> p, int n, int r) {
  const bool low = 2 * r <= n;
  const int m = low ? r : n - r;
  Matrix f = Matrix::Zero(n, m);
  for (int j = 0; j < m; ++j) f(low ? j : r + j, j) = 1.0;
  for (int row = 0; row < n; ++row)
    for (int c = 0; c < m; ++c) {
      const std::size_t k = 2 * static_cast<std::size_t>(row * m + c);
      f(row, c) += Complex(p[k], p[k + 1]);
    }
  Eigen::LLT<Matrix> gram(f.adjoint() * f);
  Matrix q;
  if (gram.info() == Eigen::Success) {
    q = f * gram.solve(f.adjoint());
  } else {
    Eigen::ColPivHouseholderQR<Matrix> qr(f);
    const Matrix basis = Matrix(qr.householderQ()).leftCols(m);
    q = basis * basis.adjoint();
  }
  q = 0.5 * (q + q.adjoint());
  return low ? q : Matrix(Matrix::Identity(n, n) - q);
}

Matrix general_block(std::span<const double> p, int n) {
  Matrix b(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const std::size_t k = 2 * static_cast<std::size_t>(r * n + c);
      b(r, c) = Complex(p[k], p[k + 1]);
    }
  return b;
}

void retract(std::vector<Matrix>& blocks) {
  double nrm = 0.0;
  for (const auto& b : blocks) nrm = std::max(nrm, linalg::spectral_norm(b));
  if (nrm > 1.0) {
    for (auto& b : blocks) b /= nrm;
  }
}

}  // namespace

SortChart::SortChart(const formula::Sort& sort, const BlockShape& shape) : sort_(sort), shape_(shape) {
  const SortKind k = sort.kind;
  int sq = 0;
  for (int n : shape.blocks()) sq += n * n;
  switch (k) {
    case SortKind::Ball:
    case SortKind::PositiveBall: branches_.push_back({{}, 2 * sq}); break;
    case SortKind::SelfAdjointBall:
    case SortKind::Unitary: branches_.push_back({{}, sq}); break;
    case SortKind::ScalarDisk: branches_.push_back({{}, 2}); break;
    case SortKind::ScalarInterval: branches_.push_back({{}, 1}); break;
    case SortKind::CentralProjection:
    case SortKind::Projection:
    case SortKind::NonzeroProjection:
    case SortKind::NontrivialProjection:
    case SortKind::PartialIsometry: {
      const RankTuple full{std::vector<int>(shape.blocks().begin(), shape.blocks().end())};
      for (auto& r : all_rank_tuples(shape)) {
        if (k == SortKind::NonzeroProjection && r.is_zero()) continue;
        if (k == SortKind::NontrivialProjection && (r.is_zero() || r == full)) continue;
        int dim = 0;
        bool indicator = true;
        for (std::size_t i = 0; i < shape.num_blocks(); ++i) {
          const int n = shape.block(i), ri = r.ranks[i];
          if (ri != 0 && ri != n) indicator = false;
          if (k == SortKind::PartialIsometry) {
            dim += ri == 0 ? 0 : (ri == n ? n * n : 2 * n * n);
          } else if (ri != 0 && ri != n) {
            dim += 2 * n * std::min(ri, n - ri);
          }
        }
        if (k == SortKind::CentralProjection) {
          if (!indicator) continue;
          dim = 0;
        }
        branches_.push_back({std::move(r), dim});
      }
      break;
    }
  }
}

int SortChart::max_dimension() const {
  int d = 0;
  for (const auto& b : branches_) d = std::max(d, b.dim);
  return d;
}

Value SortChart::point(std::size_t branch, std::span<const double> p) const {
  const SortKind k = sort_.kind;
  if (k == SortKind::ScalarDisk) {
    const double r = std::min(1.0, std::abs(p[0]));
    return std::polar(r, p[1]);
  }
  if (k == SortKind::ScalarInterval) return Complex(std::clamp(p[0], sort_.lo, sort_.hi), 0.0);

  std::vector<Matrix> blocks;
  blocks.reserve(shape_.num_blocks());
  std::size_t off = 0;
  auto take = [&](std::size_t count) {
    auto s = p.subspan(off, count);
    off += count;
    return s;
  };
  for (std::size_t i = 0; i < shape_.num_blocks(); ++i) {
    const int n = shape_.block(i);
    const std::size_t sq = static_cast<std::size_t>(n) * n;
    switch (k) {
      case SortKind::Ball: blocks.push_back(general_block(take(2 * sq), n)); break;
      case SortKind::PositiveBall: {
        const Matrix b = general_block(take(2 * sq), n);
        blocks.push_back(b.adjoint() * b);
        break;
      }
      case SortKind::SelfAdjointBall: blocks.push_back(linalg::hermitian_from_params(take(sq), n)); break;
      case SortKind::Unitary: blocks.push_back(unitary_block(take(sq), n)); break;
      case SortKind::CentralProjection: blocks.push_back(diag_projection(n, branches_[branch].ranks.ranks[i])); break;
      case SortKind::PartialIsometry: {
        const int r = branches_[branch].ranks.ranks[i];
        if (r == 0) {
          blocks.push_back(Matrix::Zero(n, n));
        } else if (r == n) {
          blocks.push_back(unitary_block(take(sq), n));
        } else {
          const Matrix u1 = unitary_block(take(sq), n);
          const Matrix u2 = unitary_block(take(sq), n);
          blocks.push_back(u1 * diag_projection(n, r) * u2);
        }
        break;
      }
      default: {  // projection sorts
        const int r = branches_[branch].ranks.ranks[i];
        if (r == 0 || r == n) {
          blocks.push_back(diag_projection(n, r));
        } else {
          blocks.push_back(frame_projection(take(2 * static_cast<std::size_t>(n) * std::min(r, n - r)), n, r));
        }
      }
    }
  }
  if (k == SortKind::Ball || k == SortKind::SelfAdjointBall || k == SortKind::PositiveBall) retract(blocks);
  return Element(shape_, std::move(blocks));
}

void SortChart::anchor(std::size_t branch, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  const SortKind k = sort_.kind;
  if (k == SortKind::ScalarInterval) {
    out[0] = sort_.lo;
    return;
  }
  if (k != SortKind::Ball && k != SortKind::SelfAdjointBall && k != SortKind::PositiveBall) return;
  // Identity: real unit diagonal entries.
  std::size_t off = 0;
  (void)branch;
  for (int n : shape_.blocks()) {
    for (int j = 0; j < n; ++j) {
      if (k == SortKind::SelfAdjointBall) {
        out[off + j] = 1.0;
      } else {
        out[off + 2 * static_cast<std::size_t>(j * n + j)] = 1.0;
      }
    }
    off += (k == SortKind::SelfAdjointBall ? 1 : 2) * static_cast<std::size_t>(n) * n;
  }
}

void SortChart::random(std::size_t branch, std::mt19937_64& rng, std::span<double> out) const {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const SortKind k = sort_.kind;
  switch (k) {
    case SortKind::ScalarDisk:
      out[0] = std::sqrt(u(rng));
      out[1] = 2.0 * std::numbers::pi * u(rng);
      return;
    case SortKind::ScalarInterval: out[0] = sort_.lo + (sort_.hi - sort_.lo) * u(rng); return;
    case SortKind::Ball:
    case SortKind::SelfAdjointBall:
    case SortKind::PositiveBall: {
      // Gaussian blocks with a random overall scale, so both the interior and
      // the boundary of the ball get starts.
      const double scale = 2.0 * u(rng) / std::sqrt(2.0 * shape_.max_block());
      for (auto& x : out) x = scale * g(rng);
      return;
    }
    default:
      (void)branch;
      for (auto& x : out) x = 1.5 * g(rng);
  }
}

Value sample_sort(const formula::Sort& sort, const BlockShape& shape, std::mt19937_64& rng) {
  const SortChart chart(sort, shape);
  if (chart.empty()) throw ValidationError("sort " + sort.to_string() + " is empty on " + shape.to_string());
  std::uniform_int_distribution<std::size_t> pick(0, chart.num_branches() - 1);
  const std::size_t b = pick(rng);
  std::vector<double> params(static_cast<std::size_t>(chart.dimension(b)));
  chart.random(b, rng, params);
  return chart.point(b, params);
}

}  // namespace csw
