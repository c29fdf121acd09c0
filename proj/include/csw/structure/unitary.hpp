#pragma once

#include "csw/algebra/element.hpp"

namespace csw {

/// Self-adjoint H with exp(iH) = u, eigenvalue phases in (-pi, pi]. Throws
/// ValidationError unless u classifies as unitary.
Element unitary_log(const Element& u, const Tolerance& tol = {});

/// exp(itH): a path of unitaries from I at t = 0 to exp(iH) at t = 1.
Element homotopy_path(const Element& h, double t);

}  // namespace csw
