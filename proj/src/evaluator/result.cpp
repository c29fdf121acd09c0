#include "csw/evaluator/result.hpp"

#include "csw/algebra/io.hpp"

namespace csw {

std::string to_string(BoundKind b) {
  switch (b) {
    case BoundKind::LowerBoundOfTrueValue: return "lower";
    case BoundKind::UpperBoundOfTrueValue: return "upper";
    case BoundKind::Estimate: return "estimate";
  }
  return "estimate";
}

nlohmann::json result_to_json(const EvalResult& r, const std::string& formula_label, const BlockShape& shape) {
  nlohmann::json w = nlohmann::json::array();
  for (const auto& wit : r.witnesses) {
    nlohmann::json j;
    if (const Element* e = std::get_if<Element>(&wit.value)) {
      j = element_to_json(*e);
    } else {
      const Complex c = std::get<Complex>(wit.value);
      j["scalar"] = {c.real(), c.imag()};
    }
    j["var"] = wit.var;
    j["sort"] = wit.sort.to_string();
    w.push_back(std::move(j));
  }
  return {{"formula", formula_label},
          {"algebra", shape.to_string()},
          {"value", r.value},
          {"bound", to_string(r.bound)},
          {"exact", r.exact},
          {"witnesses", std::move(w)},
          {"seed", r.config.seed},
          {"config", config_to_json(r.config)}};
}

}  // namespace csw
