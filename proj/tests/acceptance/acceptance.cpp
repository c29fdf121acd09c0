// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "csw/evaluator/evaluate.hpp"
#include "csw/formula/corpus.hpp"
#include "csw/formula/parser.hpp"
#include "csw/limits/limits.hpp"
#include "csw/structure/archbold.hpp"
#include "csw/structure/comparison.hpp"
#include "csw/structure/decomposition.hpp"
#include "csw/structure/dixmier.hpp"
#include "csw/structure/trace.hpp"
#include "csw/structure/unitary.hpp"
#include "oracles.hpp"

using namespace csw;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::ostringstream note;

  void check(bool ok, const std::string& what) {
    if (!ok && pass) note << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

void partitions(int remaining, int max_part, std::vector<int>& cur, std::vector<BlockShape>& out) {
  if (!cur.empty()) out.emplace_back(cur);
  for (int p = std::min(remaining, max_part); p >= 1; --p) {
    cur.push_back(p);
    partitions(remaining - p, p, cur, out);
    cur.pop_back();
  }
}

std::vector<BlockShape> shapes_up_to(int total) {
  std::vector<BlockShape> out;
  std::vector<int> cur;
  partitions(total, total, cur, out);
  return out;
}

bool commutative(const BlockShape& s) {
  return std::all_of(s.blocks().begin(), s.blocks().end(), [](int n) { return n == 1; });
}

bool is_unitary(const Element& u, double tol) {
  for (const auto& b : u.blocks()) {
    if (oracle::svd_norm(Matrix(b.adjoint() * b - Matrix::Identity(b.rows(), b.cols()))) > tol) return false;
  }
  return true;
}

bool exact_equal(const Element& a, const Element& b) {
  for (std::size_t i = 0; i < a.num_blocks(); ++i) {
    if (a.block(i) != b.block(i)) return false;
  }
  return true;
}

int trace_rank(const Matrix& p) { return static_cast<int>(std::lround(p.trace().real())); }

EvalConfig restarts(int r) {
  EvalConfig c;
  c.restarts = r;
  return c;
}

double numeric(const char* name, const char* shape, const EvalConfig& cfg = {}) {
  return evaluate_numeric(*formula::corpus_formula(name), BlockShape::parse(shape), cfg).value;
}

std::optional<double> exact(const char* name, const BlockShape& shape) {
  const auto r = evaluate_exact(*formula::corpus_formula(name), shape);
  if (!r || !r->exact) return std::nullopt;
  return r->value;
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

// ---- criteria ----------------------------------------------------------

void commutator_dichotomy(Outcome& o) {
  const auto t0 = Clock::now();
  for (const auto& s : shapes_up_to(8)) {
    const auto v = exact("phi_c", s);
    o.check(v && *v == (commutative(s) ? 0.0 : 2.0), "exact phi_c on " + s.to_string());
  }
  const double v = numeric("phi_c", "M2", restarts(64));
  o.check(v >= 1.997, "numeric phi_c on M2 = " + fmt(v));
  const double t = seconds_since(t0);
  o.check(t < 10.0, "runtime " + fmt(t) + " s");
  o.note << "numeric M2 " << fmt(v) << ", " << fmt(t) << " s";
}

void unit_sentence(Outcome& o) {
  double worst = 0.0, slowest = 0.0;
  for (const char* name : {"M1", "M2", "M3", "M4", "C^2", "C^3", "M1+M2", "M2+M3", "M1+M1+M3"}) {
    const auto shape = BlockShape::parse(name);
    const auto t0 = Clock::now();
    const auto r = evaluate_numeric(*formula::corpus_formula("phi_u"), shape);
    const double t = seconds_since(t0);
    o.check(r.value <= 1e-6, std::string("phi_u on ") + name + " = " + fmt(r.value));
    o.check(t < 1.0, std::string("runtime on ") + name);
    o.check(!r.witnesses.empty() &&
                oracle::svd_norm(std::get<Element>(r.witnesses[0].value) - Element::identity(shape)) <= 1e-9,
            std::string("witness e = I on ") + name);
    worst = std::max(worst, r.value);
    slowest = std::max(slowest, t);
  }
  o.note << "max value " << fmt(worst) << ", slowest " << fmt(slowest) << " s";
}

void commutative_pseudocompact_axioms(Outcome& o) {
  double worst = 0.0;
  for (int k = 1; k <= 4; ++k) {
    const std::string s = "C^" + std::to_string(k);
    for (const char* axiom : {"phi_c", "phi_u", "comm_pc_axiom4"}) {
      const double v = numeric(axiom, s.c_str());
      o.check(v <= 1e-3, std::string(axiom) + " on " + s + " = " + fmt(v));
      worst = std::max(worst, v);
    }
    const auto e = exact("comm_pc_axiom4", BlockShape::parse(s));
    o.check(e && *e == 0.0, "registry comm_pc_axiom4 on " + s);
  }
  o.note << "max numeric " << fmt(worst);
}

// sup_{p,q} inf_x of the comparability body on C^2, with x*x = xx* = r ranging
// over the diagonal projections (phases of x do not enter).
double comparability_c2_oracle() {
  auto norm = [](double a, double b) { return std::max(std::abs(a), std::abs(b)); };
  double best = 0.0;
  for (int p = 0; p < 4; ++p) {
    for (int q = 0; q < 4; ++q) {
      double inner = 1e300;
      for (int r = 0; r < 4; ++r) {
        auto bit = [](int m, int i) { return static_cast<double>((m >> i) & 1); };
        const double a = norm(bit(p, 0) - bit(r, 0), bit(p, 1) - bit(r, 1)) +
                         norm(bit(r, 0) * bit(q, 0) - bit(r, 0), bit(r, 1) * bit(q, 1) - bit(r, 1));
        const double b = norm(bit(q, 0) - bit(r, 0), bit(q, 1) - bit(r, 1)) +
                         norm(bit(r, 0) * bit(p, 0) - bit(r, 0), bit(r, 1) * bit(p, 1) - bit(r, 1));
        inner = std::min(inner, a * b);
      }
      best = std::max(best, inner);
    }
  }
  return best;
}

void comparability(Outcome& o) {
  for (int n = 1; n <= 5; ++n) {
    const auto e = exact("comparability", BlockShape({n}));
    o.check(e && *e == 0.0, "exact on M" + std::to_string(n));
  }
  const double truth = comparability_c2_oracle();
  const auto e = exact("comparability", BlockShape::parse("C^2"));
  o.check(truth == 1.0 && e && *e == truth, "exact on C^2 against enumeration");
  const double v = numeric("comparability", "C^2", restarts(64));
  o.check(v >= 0.9, "numeric on C^2 = " + fmt(v));
  o.note << "numeric C^2 " << fmt(v);
}

void trivial_center(Outcome& o) {
  for (const auto& s : shapes_up_to(8)) {
    const auto e = exact("central_proj_exists", s);
    o.check(e && *e == (s.num_blocks() == 1 ? 1.0 : 0.0), "exact on " + s.to_string());
  }
  for (const char* name : {"M2", "C^2", "M2+M3"}) {
    const double truth = BlockShape::parse(name).num_blocks() == 1 ? 1.0 : 0.0;
    const double v = numeric("central_proj_exists", name);
    o.check(std::abs(v - truth) <= 5e-2, std::string("numeric on ") + name + " = " + fmt(v));
    o.note << name << " " << fmt(v) << " ";
  }
}

void dixmier(Outcome& o) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  double worst_exact = 0.0, worst_ratio = 0.0;
  int runs = 0;
  for (const auto& shape : shapes_up_to(8)) {
    for (int kind = 0; kind < 3; ++kind) {
      for (int t = 0; t < 3; ++t) {
        const Element x = kind == 0   ? oracle::random_self_adjoint(shape, rng)
                          : kind == 1 ? oracle::haar_unitary(shape, rng)
                                      : oracle::random_element(shape, rng);
        std::vector<Matrix> z;
        for (const auto& b : x.blocks()) z.push_back(b.trace() / double(b.rows()) * Matrix::Identity(b.rows(), b.rows()));
        const Element expected(shape, std::move(z));
        const auto r = dixmier_average(x, DixmierMode::Exact);
        const double err = oracle::svd_norm(replay_dixmier(x, r, DixmierMode::Exact) - expected);
        worst_exact = std::max(worst_exact, err);
        o.check(err <= 1e-10, "exact error on " + shape.to_string());
        o.check(static_cast<int>(r.transcript.size()) <= shape.matrix_size(), "transcript length on " + shape.to_string());
        for (const auto& term : r.transcript) o.check(is_unitary(term.unitary, 1e-10), "unitary in transcript");
      }
    }
    for (int t = 0; t < 100; ++t) {
      const Element x = oracle::random_self_adjoint(shape, rng);
      const auto r = dixmier_average(x, DixmierMode::Iterative);
      // Rounding in a step is far below 1e-13 ||x||; ratios are measured above it.
      const double floor = 1e-13 * std::max(1.0, oracle::svd_norm(x));
      for (std::size_t k = 0; k + 1 < r.errors.size(); ++k) {
        o.check(r.errors[k + 1] <= 0.75 * r.errors[k] + floor, "3/4 contraction on " + shape.to_string());
        if (r.errors[k + 1] > 1e3 * floor) worst_ratio = std::max(worst_ratio, r.errors[k + 1] / r.errors[k]);
      }
      ++runs;
    }
  }
  const double t = seconds_since(t0);
  o.check(t < 30.0, "runtime " + fmt(t) + " s");
  o.note << runs << " iterative runs, worst ratio " << fmt(worst_ratio) << ", worst exact error " << fmt(worst_exact)
         << ", " << fmt(t) << " s";
}

void decomposition(Outcome& o) {
  const auto t0 = Clock::now();
  int cases = 0;
  for (const auto& shape : shapes_up_to(12)) {
    for (int d = 2; d <= 6; ++d) {
      const auto r = decompose_identity(shape, d);
      const std::string tag = shape.to_string() + " d=" + std::to_string(d);
      o.check(static_cast<int>(r.parts.size()) == d && static_cast<int>(r.remainder_abelians.size()) <= d - 1, tag);
      std::vector<Element> all = r.parts;
      all.insert(all.end(), r.remainder_abelians.begin(), r.remainder_abelians.end());
      Element sum = Element::zero(shape);
      bool ok = true;
      for (std::size_t a = 0; a < all.size(); ++a) {
        ok = ok && exact_equal(all[a] * all[a], all[a]) && exact_equal(all[a].adjoint(), all[a]);
        for (std::size_t b = a + 1; b < all.size(); ++b) ok = ok && exact_equal(all[a] * all[b], Element::zero(shape));
        sum += all[a];
      }
      ok = ok && exact_equal(sum, Element::identity(shape));
      for (const auto& p : r.parts) {
        for (std::size_t i = 0; i < shape.num_blocks(); ++i) ok = ok && trace_rank(p.block(i)) == trace_rank(r.parts[0].block(i));
      }
      for (const auto& p : r.remainder_abelians) {
        for (const auto& b : p.blocks()) ok = ok && trace_rank(b) <= 1;
      }
      for (std::size_t j = 0; j < r.equivalences.size(); ++j) {
        const Element& v = r.equivalences[j];
        ok = ok && exact_equal(v.adjoint() * v, r.parts[0]) && exact_equal(v * v.adjoint(), r.parts[j]);
      }
      o.check(ok, tag);
      ++cases;
    }
  }
  o.check(cases == 5 * oracle::partitions_up_to(12), "case count");
  const double t = seconds_since(t0);
  o.check(t < 5.0, "runtime " + fmt(t) + " s");
  o.note << cases << " cases, " << fmt(t) << " s";
}

void archbold(Outcome& o) {
  std::mt19937_64 rng(103);
  double worst = 0.0;
  for (const char* name : {"M2", "M3", "M2+M3"}) {
    const auto shape = BlockShape::parse(name);
    for (int t = 0; t < 50; ++t) {
      const Element a = oracle::random_element(shape, rng);
      const auto k = archbold_constants(a);
      const double gap = std::abs(k.derivation_norm - 2.0 * k.dist_to_center);
      worst = std::max(worst, gap);
      o.check(gap <= 5e-2, std::string("identity on ") + name);
      o.check(k.dist_to_center <= k.derivation_norm, std::string("K(A) <= 1 on ") + name);
    }
  }
  o.note << "150 elements, max gap " << fmt(worst);
}

void k1_triviality(Outcome& o) {
  std::mt19937_64 rng(107);
  double worst = 0.0;
  for (int n = 1; n <= 5; ++n) {
    const BlockShape s({n});
    for (int t = 0; t < 100; ++t) {
      const Element u = oracle::haar_unitary(s, rng);
      const Element h = unitary_log(u);
      o.check(oracle::svd_norm(h - h.adjoint()) <= 1e-12, "log is hermitian");
      // Independent exponential through an eigendecomposition of h.
      Eigen::ComplexEigenSolver<Matrix> es(h.block(0));
      Eigen::VectorXcd ph(n);
      for (int j = 0; j < n; ++j) ph(j) = std::polar(1.0, es.eigenvalues()(j).real());
      const Matrix e = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().inverse();
      const double err = oracle::svd_norm(Matrix(e - u.block(0)));
      worst = std::max(worst, err);
      o.check(err <= 1e-9, "round trip on M" + std::to_string(n));
      for (int k = 0; k <= 10; ++k) o.check(is_unitary(homotopy_path(h, k / 10.0), 1e-12), "path point is unitary");
      o.check(exact_equal(homotopy_path(h, 0.0), Element::identity(s)), "path starts at I");
      o.check(oracle::svd_norm(homotopy_path(h, 1.0) - u) <= 1e-9, "path ends at u");
    }
  }
  o.note << "500 unitaries, max round-trip error " << fmt(worst);
}

void unique_trace(Outcome& o) {
  std::mt19937_64 rng(109);
  double worst = 0.0;
  for (int n = 1; n <= 8; ++n) {
    const BlockShape s({n});
    for (int r = 0; r <= n; ++r) {
      const Element p = oracle::random_projection(s, {r}, rng);
      for (int d = 1; d <= 16; ++d) {
        MvnOracle counted;
        const double est = trace_from_comparisons(p, d, s, counted).value();
        const double err = std::abs(est - double(r) / n);
        worst = std::max(worst, err * d);
        o.check(err <= 1.0 / d, "n=" + std::to_string(n) + " r=" + std::to_string(r) + " d=" + std::to_string(d));
        o.check(counted.calls() > 0, "oracle used");
      }
    }
  }
  o.note << "max error x d = " << fmt(worst);
}

void strict_comparison_check(Outcome& o) {
  std::mt19937_64 rng(113);
  const auto shapes = shapes_up_to(8);
  int strict = 0;
  for (int t = 0; t < 200; ++t) {
    const auto& shape = shapes[std::uniform_int_distribution<std::size_t>(0, shapes.size() - 1)(rng)];
    // Half of the pairs are drawn with q below p in every block.
    const bool force = t % 2 == 0;
    std::vector<int> rp, rq;
    for (int n : shape.blocks()) {
      int a = std::uniform_int_distribution<int>(0, n)(rng), b = std::uniform_int_distribution<int>(0, n)(rng);
      if (force) {
        a = std::uniform_int_distribution<int>(1, n)(rng);
        b = std::uniform_int_distribution<int>(0, a - 1)(rng);
      }
      rp.push_back(a);
      rq.push_back(b);
    }
    const Element p = oracle::random_projection(shape, rp, rng), q = oracle::random_projection(shape, rq, rng);
    // Extremal traces: the normalized trace of each block.
    bool ordered = true;
    for (std::size_t i = 0; i < shape.num_blocks(); ++i) {
      ordered = ordered && q.block(i).trace().real() / shape.block(i) < p.block(i).trace().real() / shape.block(i) - 1e-9;
    }
    o.check(strict_comparison(p, q) == ordered, "strict_comparison agrees with traces on " + shape.to_string());
    if (!ordered) continue;
    ++strict;
    const auto c = mvn_compare(q, p);
    o.check(c.relation == MvnRelation::PStrictlyBelow && c.p_into_q.has_value(), "strict relation on " + shape.to_string());
    if (!c.p_into_q) continue;
    const Element& v = *c.p_into_q;
    const Element range = v * v.adjoint();
    o.check(oracle::svd_norm(v.adjoint() * v - q) <= 1e-9, "v*v = q");
    o.check(oracle::svd_norm(range * p - range) <= 1e-9, "vv* <= p");
    o.check(oracle::svd_norm(range - p) >= 0.5, "vv* != p");
  }
  o.check(strict >= 100, "strict pairs");
  o.note << strict << " strictly ordered pairs of 200";
}

void k0_demo(Outcome& o) {
  std::vector<std::int64_t> small, large;
  for (std::int64_t n = 1; n <= 64; ++n) small.push_back(n);
  for (std::int64_t n = 65; n < 1'000'000; n = n * 2 + 7) large.push_back(n);
  large.push_back(1'000'000);
  for (const auto& [ns, built] : {std::pair{small, true}, std::pair{large, false}}) {
    for (const auto& row : k0_demo_sequences(0.5, 1.0 / 3.0, ns)) {
      std::int64_t root = 0;
      while ((root + 1) * (root + 1) <= row.n) ++root;
      const std::string tag = "n=" + std::to_string(row.n);
      o.check(row.rank_s == root && row.trace_s == double(root) / double(row.n), tag + " s-trace");
      o.check(row.rank_lambda == row.n / 3 && row.trace_lambda == double(row.n / 3) / double(row.n), tag + " lambda-trace");
      o.check(row.constructed == built, tag + " regime");
    }
  }
  const auto decay = k0_demo_sequences(0.5, 0.5, {100, 10'000, 1'000'000});
  for (std::size_t i = 0; i < decay.size(); ++i) {
    // floor(sqrt n)/n <= n^(-1/2) iff floor(sqrt n)^2 <= n.
    o.check(decay[i].rank_s * decay[i].rank_s <= decay[i].n, "bound at n=" + std::to_string(decay[i].n));
    if (i > 0) o.check(decay[i].trace_s < decay[i - 1].trace_s, "strict decay");
  }
  o.note << "traces " << fmt(decay[0].trace_s) << " > " << fmt(decay[1].trace_s) << " > " << fmt(decay[2].trace_s);
}

void finite_model(Outcome& o) {
  for (int t = 1; t <= 10; ++t) {
    const auto shapes = enumerate_shapes(t);
    o.check(static_cast<long long>(shapes.size()) == oracle::partitions_up_to(t), "partition count up to " + std::to_string(t));
    std::vector<std::vector<int>> seen;
    for (const auto& s : shapes) {
      std::vector<int> b(s.blocks().begin(), s.blocks().end());
      std::sort(b.begin(), b.end());
      seen.push_back(b);
    }
    std::sort(seen.begin(), seen.end());
    o.check(std::adjacent_find(seen.begin(), seen.end()) == seen.end(), "distinct shapes");
  }
  const auto never = finite_model_search(*formula::parse("1"), 0.5, 10);
  o.check(!never.found && never.visited == oracle::partitions_up_to(10), "exhaustive visit");

  const auto a = finite_model_search(*formula::corpus_formula("phi_c"), 0.1, 3);
  o.check(a.found && *a.shape == BlockShape({1}) && a.value == 0.0, "phi_c query");
  const auto b = finite_model_search(*formula::parse("abs((sup x:ball . sup y:ball . norm(x*y - y*x)) - 2)"), 0.1, 3);
  o.check(b.found && *b.shape == BlockShape({2}) && b.value <= 1e-12, "abs(phi_c - 2) query");
  const auto c = finite_model_search(*formula::corpus_formula("central_proj_exists"), 0.1, 1);
  o.check(!c.found && *c.shape == BlockShape({1}) && c.value == 1.0, "central_proj_exists query");
  o.note << "visited " << never.visited << " shapes up to total 10";
}

void highly_irreducible(Outcome& o) {
  EvalConfig cfg = restarts(128);
  const double m1 = numeric("highly_irreducible", "M1", cfg);
  o.check(m1 == 0.0, "M1 = " + fmt(m1));
  // Only the outer start count is prescribed; the nested search is lighter
  // than the default to keep M3 near 20 s.
  cfg.inner_restarts = 8;
  cfg.local_steps = 100;
  const double m2 = numeric("highly_irreducible", "M2", cfg);
  const double m3 = numeric("highly_irreducible", "M3", cfg);
  o.check(m2 > 0.05, "M2 = " + fmt(m2));
  o.check(m3 > 0.05, "M3 = " + fmt(m3));
  o.note << "M1 " << fmt(m1) << ", M2 " << fmt(m2) << ", M3 " << fmt(m3) << " (estimates)";
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
      {"commutator dichotomy", commutator_dichotomy},
      {"unit sentence", unit_sentence},
      {"commutative pseudocompact axioms", commutative_pseudocompact_axioms},
      {"comparability", comparability},
      {"trivial-center sentence", trivial_center},
      {"Dixmier averaging", dixmier},
      {"identity decomposition", decomposition},
      {"Archbold identity", archbold},
      {"K1 triviality", k1_triviality},
      {"unique trace from comparisons", unique_trace},
      {"strict comparison", strict_comparison_check},
      {"K0 demo sequences", k0_demo},
      {"finite-model search", finite_model},
      {"highly irreducible sentence", highly_irreducible},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.note << "exception: " << e.what();
    }
    const double t = seconds_since(t0);
    std::printf("%s  %2zu  %-34s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, t, o.note.str().c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
