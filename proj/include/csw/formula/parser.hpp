#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "csw/algebra/shape.hpp"
#include "csw/formula/ast.hpp"

namespace csw::formula {

/// Syntax, binding, and sort errors. `position` is a byte offset into the
/// source text.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Parses a sentence. Free variables are rejected.
FormulaPtr parse(std::string_view text);

/// Parses a formula whose free variables may only come from `free`.
FormulaPtr parse_open(std::string_view text, const std::set<std::string>& free);

Sort parse_sort(std::string_view text);

}  // namespace csw::formula
