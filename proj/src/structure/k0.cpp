#include "csw/structure/k0.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "csw/algebra/io.hpp"
#include "csw/evaluator/sorts.hpp"
#include "csw/structure/unitary.hpp"

namespace csw {

namespace {

constexpr std::size_t kMaxClasses = 1'000'000;
constexpr int kK1Samples = 8;
constexpr std::uint64_t kK1Seed = 0x4b31;

}  // namespace

std::vector<RankTuple> interval_classes(const BlockShape& shape) {
  std::size_t total = 1;
  for (int n : shape.blocks()) {
    total *= static_cast<std::size_t>(n + 1);
    if (total > kMaxClasses) throw ValidationError("too many classes below [I] in " + shape.to_string());
  }
  std::vector<RankTuple> out;
  RankTuple g{std::vector<int>(shape.num_blocks(), 0)};
  while (true) {
    out.push_back(g);
    std::size_t i = shape.num_blocks();
    while (i > 0 && g.ranks[i - 1] == shape.block(i - 1)) g.ranks[--i] = 0;
    if (i == 0) break;
    ++g.ranks[i - 1];
  }
  // Default trace of g is sum_i g_i / sum_j n_j, so order by sum_i g_i.
  std::stable_sort(out.begin(), out.end(), [](const RankTuple& a, const RankTuple& b) {
    const int sa = std::accumulate(a.ranks.begin(), a.ranks.end(), 0);
    const int sb = std::accumulate(b.ranks.begin(), b.ranks.end(), 0);
    return sa != sb ? sa < sb : a.ranks < b.ranks;
  });
  return out;
}

K0Data k0_data(const BlockShape& shape) {
  K0Data k;
  k.group_rank = static_cast<int>(shape.num_blocks());
  k.order_unit.assign(shape.blocks().begin(), shape.blocks().end());
  // Default weights n_i / N pair with g as sum_i g_i / N.
  k.trace_functional.assign(shape.num_blocks(), 1.0 / shape.matrix_size());
  k.totally_ordered = shape.num_blocks() == 1;

  std::mt19937_64 rng(kK1Seed);
  k.k1_trivial = true;
  for (int s = 0; s < kK1Samples && k.k1_trivial; ++s) {
    const Element u = std::get<Element>(sample_sort(formula::Sort::of(formula::SortKind::Unitary), shape, rng));
    try {
      const Element h = unitary_log(u);
      k.k1_trivial = distance(homotopy_path(h, 1.0), u) <= 1e-9 && distance(homotopy_path(h, 0.0),
                                                                             Element::identity(shape)) == 0.0;
    } catch (const std::exception&) {
      k.k1_trivial = false;
    }
  }

  const std::vector<RankTuple> classes = interval_classes(shape);
  k.successors_adjacent = true;
  for (std::size_t j = 0; j + 1 < classes.size() && k.successors_adjacent; ++j) {
    int diff = 0;
    bool up = true;
    for (std::size_t i = 0; i < shape.num_blocks(); ++i) {
      const int delta = classes[j + 1].ranks[i] - classes[j].ranks[i];
      diff += std::abs(delta);
      up = up && delta >= 0;
    }
    k.successors_adjacent = diff == 1 && up;
  }
  return k;
}

nlohmann::json k0_to_json(const K0Data& k) {
  return {{"group_rank", k.group_rank},
          {"positive_cone", "componentwise"},
          {"order_unit", k.order_unit},
          {"trace_functional", k.trace_functional},
          {"totally_ordered", k.totally_ordered},
          {"k1_trivial", k.k1_trivial},
          {"successors_adjacent", k.successors_adjacent}};
}

}  // namespace csw
