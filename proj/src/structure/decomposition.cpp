#include "csw/structure/decomposition.hpp"

#include "csw/algebra/io.hpp"

namespace csw {

namespace {

// Diagonal projection onto basis vectors [begin_i, begin_i + count_i) of each block.
Element diagonal_range(const BlockShape& shape, const std::vector<int>& begin, const std::vector<int>& count) {
  std::vector<Matrix> blocks;
  for (std::size_t i = 0; i < shape.num_blocks(); ++i) {
    const int n = shape.block(i);
    Matrix m = Matrix::Zero(n, n);
    for (int j = 0; j < count[i]; ++j) m(begin[i] + j, begin[i] + j) = 1.0;
    blocks.push_back(std::move(m));
  }
  return Element(shape, std::move(blocks));
}

bool exactly_equal(const Element& a, const Element& b) {
  for (std::size_t i = 0; i < a.num_blocks(); ++i) {
    if (a.block(i) != b.block(i)) return false;
  }
  return true;
}

std::vector<int> exact_ranks(const Element& p) {
  std::vector<int> r;
  for (std::size_t i = 0; i < p.num_blocks(); ++i) {
    double t = 0.0;
    for (int j = 0; j < p.block(i).rows(); ++j) t += p.block(i)(j, j).real();
    r.push_back(static_cast<int>(t));
  }
  return r;
}

bool fail(std::string* why, const std::string& msg) {
  if (why) *why = msg;
  return false;
}

}  // namespace

DecompositionResult decompose_identity(const BlockShape& shape, int d) {
  if (d < 2) throw ValidationError("decomposition needs d >= 2, got " + std::to_string(d));
  const std::size_t k = shape.num_blocks();
  std::vector<int> size(k), rem(k);
  int max_rem = 0;
  for (std::size_t i = 0; i < k; ++i) {
    size[i] = shape.block(i) / d;
    rem[i] = shape.block(i) % d;
    max_rem = std::max(max_rem, rem[i]);
  }
  DecompositionResult r;
  r.d = d;
  std::vector<int> begin(k, 0);
  for (int j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < k; ++i) begin[i] = j * size[i];
    r.parts.push_back(diagonal_range(shape, begin, size));
  }
  for (int j = 1; j <= max_rem; ++j) {
    std::vector<int> count(k);
    for (std::size_t i = 0; i < k; ++i) {
      begin[i] = d * size[i] + j - 1;
      count[i] = rem[i] >= j ? 1 : 0;
    }
    r.remainder_abelians.push_back(diagonal_range(shape, begin, count));
  }
  for (int j = 0; j < d; ++j) {
    std::vector<Matrix> blocks;
    for (std::size_t i = 0; i < k; ++i) {
      const int n = shape.block(i);
      Matrix v = Matrix::Zero(n, n);
      for (int t = 0; t < size[i]; ++t) v(j * size[i] + t, t) = 1.0;
      blocks.push_back(std::move(v));
    }
    r.equivalences.emplace_back(shape, std::move(blocks));
  }
  return r;
}

bool check_decomposition(const DecompositionResult& r, const BlockShape& shape, std::string* why) {
  if (r.d < 2 || static_cast<int>(r.parts.size()) != r.d) return fail(why, "wrong number of parts");
  if (static_cast<int>(r.remainder_abelians.size()) > r.d - 1) return fail(why, "more than d-1 remainders");
  std::vector<const Element*> all;
  for (const auto& p : r.parts) all.push_back(&p);
  for (const auto& p : r.remainder_abelians) all.push_back(&p);
  const Element zero = Element::zero(shape);
  Element sum = zero;
  for (std::size_t a = 0; a < all.size(); ++a) {
    const Element& p = *all[a];
    if (!(p.shape() == shape)) return fail(why, "shape mismatch");
    if (!exactly_equal(p * p, p) || !exactly_equal(p.adjoint(), p)) return fail(why, "not a projection");
    for (std::size_t b = a + 1; b < all.size(); ++b) {
      if (!exactly_equal(p * *all[b], zero)) return fail(why, "not orthogonal");
    }
    sum += p;
  }
  if (!exactly_equal(sum, Element::identity(shape))) return fail(why, "sum is not the identity");
  const std::vector<int> first = exact_ranks(r.parts[0]);
  for (const auto& p : r.parts) {
    if (exact_ranks(p) != first) return fail(why, "parts have different rank tuples");
  }
  for (const auto& p : r.remainder_abelians) {
    for (int x : exact_ranks(p)) {
      if (x > 1) return fail(why, "remainder is not abelian");
    }
  }
  for (std::size_t j = 0; j < r.equivalences.size() && j < r.parts.size(); ++j) {
    const Element& v = r.equivalences[j];
    if (!exactly_equal(v.adjoint() * v, r.parts[0]) || !exactly_equal(v * v.adjoint(), r.parts[j])) {
      return fail(why, "equivalence witness fails");
    }
  }
  return true;
}

nlohmann::json decomposition_to_json(const DecompositionResult& r, const BlockShape& shape) {
  auto list = [](const std::vector<Element>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& e : v) {
      nlohmann::json j = element_to_json(e);
      j["ranks"] = rank_tuple_to_json(RankTuple{exact_ranks(e)});
      a.push_back(std::move(j));
    }
    return a;
  };
  return {{"algebra", shape.to_string()},
          {"d", r.d},
          {"parts", list(r.parts)},
          {"remainder_abelians", list(r.remainder_abelians)},
          {"equivalences", list(r.equivalences)}};
}

}  // namespace csw
