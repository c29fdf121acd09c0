#pragma once

#include "csw/algebra/element.hpp"
#include "csw/evaluator/config.hpp"

namespace csw {

struct ArchboldConstants {
  double dist_to_center = 0.0;
  double derivation_norm = 0.0;
  /// A central element at distance dist_to_center from a.
  Element nearest_central;
};

/// max_i min_l ||a_i - l I_i||, each block by nested golden-section search
/// over the box spanned by the numerical range.
double distance_to_center(const Element& a, Element* nearest = nullptr);

/// Exact distance to the centre and a numeric lower estimate of
/// sup_{||x|| <= 1} ||ax - xa||: the larger of the generic evaluator's value
/// and a blockwise generalized power method from cfg.restarts random
/// unitaries seeded by cfg.seed.
ArchboldConstants archbold_constants(const Element& a, const EvalConfig& cfg = {});

}  // namespace csw
