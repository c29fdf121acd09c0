#include "csw/limits/limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace csw {

namespace {

std::pair<double, double> tail_extremes(const std::vector<double>& v) {
  const std::size_t start = v.size() / 2;  // last ceil(N/2) entries
  double hi = -std::numeric_limits<double>::infinity(), lo = std::numeric_limits<double>::infinity();
  for (std::size_t j = start; j < v.size(); ++j) {
    hi = std::max(hi, v[j]);
    lo = std::min(lo, v[j]);
  }
  return {hi, lo};
}

void partitions(int remaining, int max_part, std::vector<int>& cur, std::vector<BlockShape>& out) {
  if (remaining == 0) {
    out.emplace_back(cur);
    return;
  }
  for (int p = std::min(remaining, max_part); p >= 1; --p) {
    cur.push_back(p);
    partitions(remaining - p, p, cur, out);
    cur.pop_back();
  }
}

}  // namespace

LimitReport eval_along(const formula::Formula& f, const AlgebraSequence& seq, const EvalConfig& cfg, int modulus) {
  if (modulus < 1) throw ValidationError("modulus must be >= 1");
  if (seq.size < 1) throw ValidationError("empty sequence");
  LimitReport r;
  for (int i = 1; i <= seq.size; ++i) {
    const BlockShape shape = seq.at(i);
    const EvalResult e = evaluate(f, shape, cfg);
    r.shapes.push_back(shape.to_string());
    r.values.push_back(e.value);
    r.exact.push_back(e.exact);
  }
  std::tie(r.limsup, r.liminf) = tail_extremes(r.values);
  if (modulus > 1) {
    for (int res = 0; res < modulus; ++res) {
      std::vector<double> sub;
      for (int i = 1; i <= seq.size; ++i) {
        if (i % modulus == res) sub.push_back(r.values[i - 1]);
      }
      if (sub.empty()) continue;
      const auto [hi, lo] = tail_extremes(sub);
      r.subsequence_limits.push_back({modulus, res, hi, lo});
    }
  }
  return r;
}

nlohmann::json limit_report_to_json(const LimitReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t j = 0; j < r.values.size(); ++j) {
    rows.push_back({{"index", j + 1}, {"algebra", r.shapes[j]}, {"value", r.values[j]}, {"exact", bool(r.exact[j])}});
  }
  nlohmann::json j{{"values", rows}, {"limsup", r.limsup}, {"liminf", r.liminf}};
  if (!r.subsequence_limits.empty()) {
    nlohmann::json subs = nlohmann::json::array();
    for (const auto& s : r.subsequence_limits) {
      subs.push_back({{"modulus", s.modulus}, {"residue", s.residue}, {"limsup", s.limsup}, {"liminf", s.liminf}});
    }
    j["subsequence_limits"] = subs;
  }
  return j;
}

ModInvariant mod_d_invariant(const IntegerRule& n, std::int64_t d, std::optional<Subsequence> sub) {
  if (d < 1) throw ValidationError("d must be >= 1, got " + std::to_string(d));
  if (sub && (sub->modulus < 1 || sub->residue < 0 || sub->residue >= sub->modulus)) {
    throw ValidationError("subsequence needs modulus >= 1 and 0 <= residue < modulus");
  }
  std::vector<std::int64_t> residues;
  for (int i = n.first(); i <= n.last(); ++i) {
    if (sub && i % sub->modulus != sub->residue) continue;
    const std::int64_t v = n.at(i) % d;
    residues.push_back(v < 0 ? v + d : v);
  }
  if (residues.empty()) throw ValidationError("the subsequence has no indices in range");
  ModInvariant m;
  for (auto v : residues) ++m.histogram[v];
  const std::size_t start = residues.size() / 2;
  if (std::all_of(residues.begin() + static_cast<std::ptrdiff_t>(start), residues.end(),
                  [&](std::int64_t v) { return v == residues.back(); })) {
    m.value = residues.back();
  }
  return m;
}

nlohmann::json mod_invariant_to_json(const ModInvariant& m) {
  nlohmann::json h = nlohmann::json::object();
  for (const auto& [k, v] : m.histogram) h[std::to_string(k)] = v;
  nlohmann::json j{{"divergent", m.divergent()}, {"histogram", h}};
  j["value"] = m.value ? nlohmann::json(*m.value) : nlohmann::json(nullptr);
  return j;
}

std::vector<BlockShape> enumerate_shapes(int max_total) {
  std::vector<BlockShape> out;
  std::vector<int> cur;
  for (int t = 1; t <= max_total; ++t) partitions(t, t, cur, out);
  return out;
}

SearchResult finite_model_search(const formula::Formula& f, double eps, int max_total_dim, const EvalConfig& cfg) {
  if (!(eps > 0.0)) throw ValidationError("eps must be > 0");
  if (max_total_dim < 1) throw ValidationError("max total dimension must be >= 1");
  SearchResult r;
  r.value = std::numeric_limits<double>::infinity();
  for (const auto& shape : enumerate_shapes(max_total_dim)) {
    ++r.visited;
    const double v = std::abs(evaluate(f, shape, cfg).value);
    if (v < r.value) {
      r.value = v;
      r.shape = shape;
    }
    if (v < eps) {
      r.found = true;
      r.value = v;
      r.shape = shape;
      break;
    }
  }
  return r;
}

nlohmann::json search_result_to_json(const SearchResult& r) {
  return {{"found", r.found},
          {"algebra", r.shape ? nlohmann::json(r.shape->to_string()) : nlohmann::json(nullptr)},
          {"value", r.value},
          {"visited", r.visited}};
}

std::int64_t robust_floor(double x) {
  const double f = std::floor(x);
  if (x - f >= 1.0 - 1e-12 * std::max(1.0, std::abs(x))) return static_cast<std::int64_t>(f) + 1;
  return static_cast<std::int64_t>(f);
}

std::vector<K0DemoRow> k0_demo_sequences(double s, double lambda, const std::vector<std::int64_t>& ns) {
  if (!(s >= 0.0 && s <= 1.0)) throw ValidationError("s must lie in [0, 1]");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ValidationError("lambda must lie in [0, 1]");
  std::vector<K0DemoRow> rows;
  for (std::int64_t n : ns) {
    if (n < 1) throw ValidationError("n must be >= 1");
    K0DemoRow row;
    row.n = n;
    row.rank_s = std::min<std::int64_t>(n, robust_floor(std::pow(static_cast<double>(n), s)));
    row.rank_lambda = std::min<std::int64_t>(n, robust_floor(static_cast<double>(n) * lambda));
    row.constructed = n <= kK0DemoElementLimit;
    if (row.constructed) {
      const BlockShape m({static_cast<int>(n)});
      row.trace_s = normalized_trace(Element::diagonal_projection(m, RankTuple{{static_cast<int>(row.rank_s)}})).real();
      row.trace_lambda =
          normalized_trace(Element::diagonal_projection(m, RankTuple{{static_cast<int>(row.rank_lambda)}})).real();
    } else {
      row.trace_s = static_cast<double>(row.rank_s) / static_cast<double>(n);
      row.trace_lambda = static_cast<double>(row.rank_lambda) / static_cast<double>(n);
    }
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json k0_demo_to_json(const std::vector<K0DemoRow>& rows) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& r : rows) {
    a.push_back({{"n", r.n},
                 {"rank_s", r.rank_s},
                 {"trace_s", r.trace_s},
                 {"rank_lambda", r.rank_lambda},
                 {"trace_lambda", r.trace_lambda},
                 {"regime", r.constructed ? "element" : "rank_arithmetic"}});
  }
  return a;
}

}  // namespace csw
