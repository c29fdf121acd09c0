#pragma once

#include <string>

#include "csw/formula/ast.hpp"

namespace csw::formula {

/// Shortest decimal text that reads back to the same double.
std::string format_real(double x);
std::string format_complex(Complex c);

/// Canonical DSL text. parse(to_string(f)) is structurally equal to f.
std::string to_string(const Formula& f);
std::string to_string(const Term& t);

}  // namespace csw::formula
