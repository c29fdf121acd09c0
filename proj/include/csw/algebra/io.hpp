#pragma once

#include <json.hpp>

#include "csw/algebra/element.hpp"

namespace csw {

/// {"shape":[2,3],"blocks":[[[re,im],...],...]}: each block is its entries
/// in row-major order, each entry a [re,im] pair.
nlohmann::json element_to_json(const Element& a);

/// Inverse of element_to_json. Also accepts blocks given as nested rows.
/// Throws ValidationError on malformed payloads.
Element element_from_json(const nlohmann::json& j);

nlohmann::json rank_tuple_to_json(const RankTuple& r);

}  // namespace csw
