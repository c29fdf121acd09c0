#pragma once

#include <json.hpp>

#include "csw/algebra/element.hpp"

namespace csw {

/// K_0 of a direct sum of k matrix blocks: Z^k with the componentwise cone.
struct K0Data {
  int group_rank = 0;
  std::vector<int> order_unit;
  /// K_0(tr)(g) = sum_i trace_functional[i] g_i for the default trace.
  std::vector<double> trace_functional;
  bool totally_ordered = false;
  /// unitary_log round-trips on sampled unitaries, so every unitary is
  /// connected to the identity.
  bool k1_trivial = false;
  /// Consecutive classes of interval_classes differ by one minimal class.
  bool successors_adjacent = false;
};

/// Classes 0 <= g <= [I], ordered by trace, ties broken lexicographically.
std::vector<RankTuple> interval_classes(const BlockShape& shape);

K0Data k0_data(const BlockShape& shape);

nlohmann::json k0_to_json(const K0Data& k);

}  // namespace csw
