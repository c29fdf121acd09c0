#pragma once

#include <cstdint>

#include <json.hpp>

#include "csw/algebra/tolerance.hpp"

namespace csw {

/// Search budget for the numeric evaluator.
struct EvalConfig {
  std::uint64_t seed = 1;
  /// Starts for the outermost quantifier block.
  int restarts = 32;
  /// Starts for a block one level down; deeper blocks get
  /// inner_restarts * nest_budget_decay^(depth-1).
  int inner_restarts = 16;
  /// Local-search iterations at the outermost level, scaled by
  /// nest_budget_decay per level of nesting.
  int local_steps = 200;
  double step_scale = 0.5;
  /// Grid points for a lone disk or interval quantifier.
  int scalar_grid = 64;
  double nest_budget_decay = 0.5;
  Tolerance tolerance;

  /// Throws ValidationError when a field is out of range.
  void validate() const;
};

/// Seed from the CSL_SEED environment variable, `fallback` when unset.
/// Throws ValidationError when it is set but not an unsigned integer.
std::uint64_t seed_from_environment(std::uint64_t fallback = 1);

nlohmann::json config_to_json(const EvalConfig& cfg);

}  // namespace csw
