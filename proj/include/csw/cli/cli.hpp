#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace csw::cli {

/// Runs `csw` with `args` (not including the program name). Returns 0 on
/// success, 1 on validation errors (bad shapes, formulas, flags), 2 on
/// internal failures. Help goes to `out` with exit code 0; every error is a
/// single line on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace csw::cli
