#pragma once

namespace csw {

/// Every approximate comparison in the library reads its slack from here.
struct Tolerance {
  /// Slack for deciding whether an element belongs to a definable set.
  double eps_class = 1e-8;
  /// Slack for numerical identities (C*-identity, trace property, ...).
  double eps_num = 1e-9;
};

}  // namespace csw
