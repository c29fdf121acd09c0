#pragma once

#include <map>
#include <optional>
#include <vector>

#include <json.hpp>

#include "csw/evaluator/evaluate.hpp"
#include "csw/limits/sequence.hpp"

namespace csw {

struct SubsequenceLimit {
  int modulus = 1;
  int residue = 0;
  double limsup = 0.0;
  double liminf = 0.0;
};

/// Limits over a finite range stand in for limits along an ultrafilter: the
/// limsup and liminf are the max and min over the tail, the last
/// ceil(N/2) indices.
struct LimitReport {
  std::vector<std::string> shapes;
  std::vector<double> values;
  std::vector<bool> exact;
  double limsup = 0.0;
  double liminf = 0.0;
  std::vector<SubsequenceLimit> subsequence_limits;
};

/// Evaluates `f` at every index with evaluate() (registry first). With a
/// modulus m > 1, subsequence_limits has one entry per residue class of i.
LimitReport eval_along(const formula::Formula& f, const AlgebraSequence& seq, const EvalConfig& cfg = {},
                       int modulus = 1);

nlohmann::json limit_report_to_json(const LimitReport& r);

struct Subsequence {
  int modulus = 1;
  int residue = 0;
};

struct ModInvariant {
  /// Residue shared by the whole tail (last ceil(N/2) terms) of the
  /// (sub)sequence, or nullopt when the tail takes several residues.
  std::optional<std::int64_t> value;
  /// Residue counts over the whole (sub)sequence.
  std::map<std::int64_t, int> histogram;
  bool divergent() const { return !value.has_value(); }
};

/// n_i mod d along the rule, optionally restricted to i = residue (mod modulus).
/// Throws ValidationError if d < 1 or the subsequence is empty.
ModInvariant mod_d_invariant(const IntegerRule& n, std::int64_t d, std::optional<Subsequence> sub = std::nullopt);

nlohmann::json mod_invariant_to_json(const ModInvariant& m);

/// Shapes with sum n_i = t for t = 1..max_total, each total ordered by
/// partitions with the largest block first (M2 before C^2).
std::vector<BlockShape> enumerate_shapes(int max_total);

struct SearchResult {
  bool found = false;
  /// A shape with |value| < eps when found, else the argmin.
  std::optional<BlockShape> shape;
  double value = 0.0;
  int visited = 0;
};

/// Scans enumerate_shapes(max_total_dim), stopping at the first shape with
/// |f| < eps. Throws ValidationError unless eps > 0 and max_total_dim >= 1.
SearchResult finite_model_search(const formula::Formula& f, double eps, int max_total_dim, const EvalConfig& cfg = {});

nlohmann::json search_result_to_json(const SearchResult& r);

struct K0DemoRow {
  std::int64_t n = 0;
  std::int64_t rank_s = 0;       // floor(n^s)
  double trace_s = 0.0;          // normalized trace of a rank floor(n^s) projection of M_n
  std::int64_t rank_lambda = 0;  // floor(n lambda)
  double trace_lambda = 0.0;
  /// True when the projections were built as Elements (n <= 64); above that
  /// the traces are rank / n.
  bool constructed = false;
};

constexpr std::int64_t kK0DemoElementLimit = 64;

/// floor(x) for x = n^s or n lambda, treating values within 1e-12 (relative)
/// below an integer as that integer so that decimal inputs such as 1/3 behave
/// exactly.
std::int64_t robust_floor(double x);

/// Throws ValidationError unless s and lambda lie in [0, 1] and every n >= 1.
std::vector<K0DemoRow> k0_demo_sequences(double s, double lambda, const std::vector<std::int64_t>& ns);

nlohmann::json k0_demo_to_json(const std::vector<K0DemoRow>& rows);

}  // namespace csw
