#pragma once

#include <optional>

#include "csw/evaluator/result.hpp"
#include "csw/formula/ast.hpp"

namespace csw {

/// Nested multi-start local search. Never throws on budget exhaustion; throws
/// ValidationError if `f` is not a sentence or the config is invalid.
///
/// Quantifier conventions: consecutive quantifiers of one kind are searched
/// jointly; a quantifier over a sort that is empty on the shape contributes 0.
EvalResult evaluate_numeric(const formula::Formula& f, const BlockShape& shape, const EvalConfig& cfg = {});

/// Value of `f` with every quantified variable fixed: the quantifier-free core
/// of the outermost block evaluated at given witnesses, and similar checks.
/// Variables bound inside `f` are still searched with `cfg`.
double evaluate_at(const formula::Formula& body, const BlockShape& shape, const std::vector<Witness>& env,
                   const EvalConfig& cfg = {});

/// Exact value from the template registry, or nullopt when no template
/// matches. Closed connectives over recognized sentences are evaluated too.
std::optional<EvalResult> evaluate_exact(const formula::Formula& f, const BlockShape& shape);

/// Name of the registry template `f` matches up to renaming, if any.
std::optional<std::string> registry_match(const formula::Formula& f);

/// evaluate_exact when it recognizes `f`, else evaluate_numeric.
EvalResult evaluate(const formula::Formula& f, const BlockShape& shape, const EvalConfig& cfg = {});

}  // namespace csw
