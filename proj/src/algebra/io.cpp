#include "csw/algebra/io.hpp"

#include <string>

namespace csw {

using nlohmann::json;

json element_to_json(const Element& a) {
  json shape = json::array();
  for (int n : a.shape().blocks()) shape.push_back(n);
  json blocks = json::array();
  for (const auto& b : a.blocks()) {
    json entries = json::array();
    for (Eigen::Index r = 0; r < b.rows(); ++r) {
      for (Eigen::Index c = 0; c < b.cols(); ++c) entries.push_back(json::array({b(r, c).real(), b(r, c).imag()}));
    }
    blocks.push_back(std::move(entries));
  }
  return json{{"shape", shape}, {"blocks", blocks}};
}

namespace {

Complex read_entry(const json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
    throw ValidationError("element entries must be [re,im] pairs");
  }
  return {e[0].get<double>(), e[1].get<double>()};
}

}  // namespace

Element element_from_json(const json& j) {
  if (!j.is_object() || !j.contains("shape") || !j.contains("blocks")) {
    throw ValidationError("element JSON needs \"shape\" and \"blocks\"");
  }
  std::vector<int> dims;
  for (const auto& n : j.at("shape")) {
    if (!n.is_number_integer()) throw ValidationError("shape entries must be integers");
    dims.push_back(n.get<int>());
  }
  BlockShape shape(std::move(dims));
  const json& blocks = j.at("blocks");
  if (!blocks.is_array() || blocks.size() != shape.num_blocks()) {
    throw ValidationError("element JSON has the wrong number of blocks");
  }
  std::vector<Matrix> mats;
  for (std::size_t i = 0; i < shape.num_blocks(); ++i) {
    const int n = shape.block(i);
    const json& b = blocks[i];
    Matrix m(n, n);
    const bool nested = b.is_array() && b.size() == static_cast<std::size_t>(n) && n > 1 && b[0].is_array() &&
                        b[0].size() == static_cast<std::size_t>(n) && b[0][0].is_array();
    if (nested) {
      for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) m(r, c) = read_entry(b[r][c]);
      }
    } else {
      if (!b.is_array() || b.size() != static_cast<std::size_t>(n) * n) {
        throw ValidationError("block " + std::to_string(i) + " needs " + std::to_string(n * n) + " entries");
      }
      for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) m(r, c) = read_entry(b[static_cast<std::size_t>(r * n + c)]);
      }
    }
    mats.push_back(std::move(m));
  }
  return Element(shape, std::move(mats));
}

json rank_tuple_to_json(const RankTuple& r) { return json(r.ranks); }

}  // namespace csw
