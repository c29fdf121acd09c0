#pragma once

#include <string>
#include <vector>

#include "csw/formula/ast.hpp"

namespace csw::formula {

struct CorpusEntry {
  std::string name;
  std::string origin;  // where the sentence comes from, in words
  std::string text;    // DSL source
  FormulaPtr formula;
};

/// The shipped sentence roster, in a stable order.
const std::vector<CorpusEntry>& corpus();

/// Throws csw::ValidationError for unknown names. Accepts "dixmier_<n>" for
/// any n ≥ 1 besides the shipped entries.
const CorpusEntry& corpus_entry(const std::string& name);
FormulaPtr corpus_formula(const std::string& name);

/// Smallest K with (3/4)^K < 1/(2n).
int dixmier_depth(int n);

/// Deterministic delta-net of the closed unit disk: the centre plus rings of
/// radius j*delta (capped at 1), ring j carrying ceil(2*pi*r_j/delta) points.
/// Every point of the disk lies within delta/sqrt(2) of the net.
std::vector<Complex> disk_net(double delta);

/// abs(max(psi, 1/n) - 1/n) where psi is the sup over self-adjoint
/// contractions x of the inf over 2^K unitaries, D central projections and D
/// disk scalars of || sum_i 2^-K u_i* x u_i - sum_j l_j p_j ||, with
/// K = dixmier_depth(n) and D = |disk_net(1/(2n))|. Zero iff psi ≤ 1/n.
FormulaPtr dixmier_sentence(int n);

}  // namespace csw::formula
