#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "csw/evaluator/config.hpp"
#include "csw/evaluator/sorts.hpp"

namespace csw {

enum class BoundKind { LowerBoundOfTrueValue, UpperBoundOfTrueValue, Estimate };

/// "lower", "upper" or "estimate".
std::string to_string(BoundKind b);

struct Witness {
  std::string var;
  formula::Sort sort;
  Value value;
};

struct EvalResult {
  double value = 0.0;
  BoundKind bound = BoundKind::Estimate;
  bool exact = false;
  /// Best point found for the outermost quantifier block, projections snapped.
  std::vector<Witness> witnesses;
  EvalConfig config;
};

/// {"formula", "algebra", "value", "bound", "exact", "witnesses", "seed", "config"}.
/// Element witnesses use the element schema plus "var" and "sort"; scalar
/// witnesses carry "scalar": [re, im].
nlohmann::json result_to_json(const EvalResult& r, const std::string& formula_label, const BlockShape& shape);

}  // namespace csw
