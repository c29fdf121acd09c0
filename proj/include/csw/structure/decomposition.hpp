#pragma once

#include <json.hpp>

#include "csw/algebra/element.hpp"

namespace csw {

/// I = parts[0] + ... + parts[d-1] + remainder_abelians, all diagonal.
struct DecompositionResult {
  int d = 0;
  std::vector<Element> parts;
  /// At most d-1 projections, each of rank at most one in every block.
  std::vector<Element> remainder_abelians;
  /// equivalences[j]: v with v*v = parts[0] and vv* = parts[j].
  std::vector<Element> equivalences;
};

/// Block n_i = k_i d + r_i: every part takes k_i consecutive basis vectors of
/// block i; the j-th remainder takes one more vector from every block with
/// r_i >= j. Throws ValidationError if d < 2.
DecompositionResult decompose_identity(const BlockShape& shape, int d);

/// Checks every invariant with exact comparisons. On failure returns false and
/// describes the first violation in `why`.
bool check_decomposition(const DecompositionResult& r, const BlockShape& shape, std::string* why = nullptr);

nlohmann::json decomposition_to_json(const DecompositionResult& r, const BlockShape& shape);

}  // namespace csw
