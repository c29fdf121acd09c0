#include "csw/evaluator/config.hpp"

#include <cstdlib>
#include <string>

#include "csw/algebra/shape.hpp"

namespace csw {

void EvalConfig::validate() const {
  if (restarts < 1) throw ValidationError("restarts must be positive");
  if (inner_restarts < 1) throw ValidationError("inner_restarts must be positive");
  if (local_steps < 1) throw ValidationError("local_steps must be positive");
  if (!(step_scale > 0.0)) throw ValidationError("step_scale must be positive");
  if (scalar_grid < 1) throw ValidationError("scalar_grid must be positive");
  if (!(nest_budget_decay > 0.0 && nest_budget_decay <= 1.0)) {
    throw ValidationError("nest_budget_decay must lie in (0,1]");
  }
  if (!(tolerance.eps_class >= 0.0) || !(tolerance.eps_num >= 0.0)) {
    throw ValidationError("tolerances must be nonnegative");
  }
}

std::uint64_t seed_from_environment(std::uint64_t fallback) {
  const char* raw = std::getenv("CSL_SEED");
  if (raw == nullptr || *raw == '\0') return fallback;
  const std::string s(raw);
  if (s.find_first_not_of("0123456789") != std::string::npos) {
    throw ValidationError("CSL_SEED must be an unsigned integer, got '" + s + "'");
  }
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw ValidationError("CSL_SEED is out of range: '" + s + "'");
  }
}

nlohmann::json config_to_json(const EvalConfig& cfg) {
  return {{"seed", cfg.seed},
          {"restarts", cfg.restarts},
          {"inner_restarts", cfg.inner_restarts},
          {"local_steps", cfg.local_steps},
          {"step_scale", cfg.step_scale},
          {"scalar_grid", cfg.scalar_grid},
          {"nest_budget_decay", cfg.nest_budget_decay},
          {"eps_class", cfg.tolerance.eps_class},
          {"eps_num", cfg.tolerance.eps_num}};
}

}  // namespace csw
