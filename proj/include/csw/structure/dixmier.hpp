#pragma once

#include <json.hpp>

#include "csw/algebra/element.hpp"

namespace csw {

enum class DixmierMode { Exact, Iterative };

struct DixmierTerm {
  Element unitary;
  double coefficient;
};

/// Exact mode: center = sum_j c_j u_j x u_j*.
/// Iterative mode: x_{k+1} = (1 - c_k) x_k + c_k u_k x_k u_k*, and errors[k]
/// is ||x_k - center||. A non-self-adjoint x is split into hermitian parts;
/// the imaginary part's steps go to imaginary_transcript and errors hold the
/// larger of the two.
struct DixmierResult {
  Element center;
  std::vector<DixmierTerm> transcript;
  std::vector<DixmierTerm> imaginary_transcript;
  std::vector<double> errors;
};

/// Per block (Tr(x_i)/n_i) I_i.
Element center_valued_trace(const Element& x);

/// Exact mode averages over n_i unitaries per block: cyclic shifts of an
/// eigenbasis, or for a non-normal block the clock unitaries in a basis where
/// x - tau I has zero diagonal. Blocks are merged into at most sum n_i terms.
/// Iterative mode repeats the step x -> (x + u x u*)/2 with u reversing the eigenbasis of x - center.
DixmierResult dixmier_average(const Element& x, DixmierMode mode, const Tolerance& tol = {});

/// Re-applies a transcript to x.
Element replay_dixmier(const Element& x, const DixmierResult& r, DixmierMode mode);

nlohmann::json dixmier_to_json(const DixmierResult& r);

}  // namespace csw
