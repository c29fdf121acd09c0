#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "csw/evaluator/evaluate.hpp"
#include "csw/formula/corpus.hpp"
#include "csw/formula/parser.hpp"
#include "oracles.hpp"

using namespace csw;
using namespace csw::formula;

namespace {

double herm_defect(const Matrix& m) { return oracle::svd_norm(Matrix(m - m.adjoint())); }

double min_eigenvalue(const Matrix& h) {
  Eigen::ComplexEigenSolver<Matrix> es(h);
  double lo = 1e300;
  for (int i = 0; i < es.eigenvalues().size(); ++i) lo = std::min(lo, es.eigenvalues()(i).real());
  return lo;
}

int trace_rank(const Matrix& p) { return static_cast<int>(std::lround(p.trace().real())); }

// Independent membership check of a sampled point, block by block.
void check_member(const Sort& sort, const BlockShape& shape, const Value& v) {
  if (sort.kind == SortKind::ScalarDisk) {
    CHECK(std::abs(std::get<Complex>(v)) <= 1.0 + 1e-12);
    return;
  }
  if (sort.kind == SortKind::ScalarInterval) {
    const Complex z = std::get<Complex>(v);
    CHECK(z.imag() == 0.0);
    CHECK(z.real() >= sort.lo);
    CHECK(z.real() <= sort.hi);
    return;
  }
  const Element& a = std::get<Element>(v);
  REQUIRE(a.shape() == shape);
  int total_rank = 0;
  for (std::size_t i = 0; i < shape.num_blocks(); ++i) {
    const Matrix& b = a.block(i);
    const int n = shape.block(i);
    const Matrix id = Matrix::Identity(n, n);
    switch (sort.kind) {
      case SortKind::Ball: CHECK(oracle::svd_norm(b) <= 1.0 + 1e-12); break;
      case SortKind::SelfAdjointBall:
        CHECK(oracle::svd_norm(b) <= 1.0 + 1e-12);
        CHECK(herm_defect(b) <= 1e-12);
        break;
      case SortKind::PositiveBall:
        CHECK(oracle::svd_norm(b) <= 1.0 + 1e-12);
        CHECK(herm_defect(b) <= 1e-10);
        CHECK(min_eigenvalue(b) >= -1e-10);
        break;
      case SortKind::Unitary: CHECK(oracle::svd_norm(Matrix(b.adjoint() * b - id)) <= 1e-8); break;
      case SortKind::PartialIsometry: CHECK(oracle::svd_norm(Matrix(b * b.adjoint() * b - b)) <= 1e-8); break;
      default: {
        CHECK(oracle::svd_norm(Matrix(b * b - b)) <= 1e-8);
        CHECK(herm_defect(b) <= 1e-8);
        const int r = trace_rank(b);
        total_rank += r;
        if (sort.kind == SortKind::CentralProjection) CHECK((r == 0 || r == n));
        if (sort.kind == SortKind::CentralProjection) CHECK(oracle::svd_norm(Matrix(b - (r == 0 ? 0.0 : 1.0) * id)) <= 1e-12);
      }
    }
  }
  if (sort.kind == SortKind::NonzeroProjection) CHECK(total_rank > 0);
  if (sort.kind == SortKind::NontrivialProjection) {
    CHECK(total_rank > 0);
    CHECK(total_rank < shape.dimension());
  }
}

EvalConfig budget(int restarts, int inner, int steps) {
  EvalConfig c;
  c.restarts = restarts;
  c.inner_restarts = inner;
  c.local_steps = steps;
  return c;
}

}  // namespace

TEST_CASE("sampled points belong to their sorts") {
  std::mt19937_64 rng(11);
  const std::vector<Sort> sorts = {Sort::of(SortKind::Ball),          Sort::of(SortKind::SelfAdjointBall),
                                   Sort::of(SortKind::PositiveBall),  Sort::of(SortKind::Projection),
                                   Sort::of(SortKind::NonzeroProjection), Sort::of(SortKind::NontrivialProjection),
                                   Sort::of(SortKind::CentralProjection), Sort::of(SortKind::Unitary),
                                   Sort::of(SortKind::PartialIsometry), Sort::of(SortKind::ScalarDisk),
                                   Sort::interval(0.0, 1.0),          Sort::interval(-2.0, 0.5)};
  for (const char* d : {"M2", "C^2", "M3", "M2+M3", "M1+M4"}) {
    const BlockShape shape = BlockShape::parse(d);
    for (const auto& s : sorts) {
      CAPTURE(d);
      CAPTURE(s.to_string());
      for (int k = 0; k < 20; ++k) check_member(s, shape, sample_sort(s, shape, rng));
    }
  }
}

TEST_CASE("sampled points pass the library classifier") {
  std::mt19937_64 rng(5);
  const BlockShape shape = BlockShape::parse("M2+M3");
  for (int k = 0; k < 20; ++k) {
    CHECK(classify(std::get<Element>(sample_sort(Sort::of(SortKind::Unitary), shape, rng))).unitary);
    CHECK(classify(std::get<Element>(sample_sort(Sort::of(SortKind::Projection), shape, rng))).projection);
    CHECK(classify(std::get<Element>(sample_sort(Sort::of(SortKind::PartialIsometry), shape, rng))).partial_isometry);
    const auto z = std::get<Element>(sample_sort(Sort::of(SortKind::CentralProjection), shape, rng));
    CHECK(classify(z).central);
    CHECK(classify(z).projection);
  }
}

TEST_CASE("empty sorts") {
  std::mt19937_64 rng(1);
  const BlockShape m1 = BlockShape::parse("M1");
  CHECK(SortChart(Sort::of(SortKind::NontrivialProjection), m1).empty());
  CHECK_THROWS_AS(sample_sort(Sort::of(SortKind::NontrivialProjection), m1, rng), ValidationError);
  // A quantifier over an empty sort contributes 0.
  CHECK(evaluate_numeric(*parse("sup p:proj_nt . norm(p) + 1"), m1).value == 0.0);
  CHECK(evaluate_numeric(*parse("1 + (inf p:proj_nt . norm(p))"), m1).value == doctest::Approx(1.0));
}

TEST_CASE("chart branches and anchors") {
  const BlockShape shape = BlockShape::parse("M2+M3");
  const SortChart proj(Sort::of(SortKind::Projection), shape);
  CHECK(proj.num_branches() == 12);
  for (std::size_t b = 0; b < proj.num_branches(); ++b) {
    std::vector<double> p(static_cast<std::size_t>(proj.dimension(b)));
    proj.anchor(b, p);
    const Element e = std::get<Element>(proj.point(b, p));
    const Element q = Element::diagonal_projection(shape, proj.ranks(b));
    CHECK(oracle::svd_norm(Element(e - q)) <= 1e-12);
  }
  const SortChart ball(Sort::of(SortKind::Ball), shape);
  std::vector<double> p(static_cast<std::size_t>(ball.dimension(0)));
  ball.anchor(0, p);
  CHECK(oracle::svd_norm(Element(std::get<Element>(ball.point(0, p)) - Element::identity(shape))) <= 1e-12);
  CHECK(SortChart(Sort::of(SortKind::CentralProjection), shape).num_branches() == 4);
  CHECK(SortChart(Sort::of(SortKind::NonzeroProjection), shape).num_branches() == 11);
  CHECK(SortChart(Sort::of(SortKind::NontrivialProjection), shape).num_branches() == 10);
}

TEST_CASE("commutator sentence numerically") {
  const FormulaPtr phi_c = corpus_formula("phi_c");
  const EvalResult c2 = evaluate_numeric(*phi_c, BlockShape::parse("C^2"));
  CHECK(c2.value <= 1e-6);
  CHECK(c2.bound == BoundKind::LowerBoundOfTrueValue);
  CHECK_FALSE(c2.exact);
  const EvalResult m2 = evaluate_numeric(*phi_c, BlockShape::parse("M2"));
  CHECK(m2.value >= 2.0 - 1e-3);
  // Contractions satisfy ||xy - yx|| <= 2.
  CHECK(m2.value <= 2.0 + 1e-9);
}

TEST_CASE("unit sentence numerically") {
  const EvalResult r = evaluate_numeric(*corpus_formula("phi_u"), BlockShape::parse("M3"));
  CHECK(r.value <= 1e-6);
  CHECK(r.bound == BoundKind::Estimate);
}

TEST_CASE("exact registry values") {
  const auto central = evaluate_exact(*corpus_formula("central_proj_exists"), BlockShape::parse("M2"));
  REQUIRE(central);
  CHECK(central->value == 1.0);
  CHECK(central->exact);
  CHECK(evaluate_exact(*corpus_formula("comparability"), BlockShape::parse("C^2"))->value == 1.0);
  CHECK(evaluate_exact(*corpus_formula("comparability"), BlockShape::parse("M5"))->value == 0.0);
  CHECK(evaluate_exact(*corpus_formula("central_proj_exists"), BlockShape::parse("M2+M3"))->value == 0.0);
  CHECK(evaluate_exact(*corpus_formula("comm_pc_axiom4"), BlockShape::parse("C^3"))->value == 0.0);
  CHECK_FALSE(evaluate_exact(*corpus_formula("comm_pc_axiom4"), BlockShape::parse("M2")));
  CHECK_FALSE(evaluate_exact(*corpus_formula("highly_irreducible"), BlockShape::parse("M2")));
  CHECK(evaluate_exact(*corpus_formula("dixmier_1"), BlockShape::parse("M2"))->value == 0.0);
  CHECK(evaluate_exact(*dixmier_sentence(3), BlockShape::parse("M2"))->value == 0.0);
}

TEST_CASE("registry matching is up to renaming only") {
  CHECK(registry_match(*parse("sup a:ball . sup b:ball . norm(a*b - b*a)")) == std::optional<std::string>("phi_c"));
  CHECK_FALSE(registry_match(*parse("sup a:ball . sup b:ball . norm(a*b + b*a)")));
  CHECK_FALSE(registry_match(*parse("sup a:sa_ball . sup b:ball . norm(a*b - b*a)")));
  CHECK(registry_match(*dixmier_sentence(2)) == std::optional<std::string>("dixmier_2"));
  const FormulaPtr shifted = abs_diff(corpus_formula("phi_c"), constant(2.0));
  CHECK(evaluate_exact(*shifted, BlockShape::parse("M2"))->value == 0.0);
  CHECK(evaluate_exact(*shifted, BlockShape::parse("C^3"))->value == 2.0);
  CHECK(evaluate_exact(*parse("norm(2*I) + 1"), BlockShape::parse("M2"))->value == doctest::Approx(3.0));
}

TEST_CASE("commutator dichotomy on every small shape") {
  for (int total = 1; total <= 6; ++total) {
    // All shapes with the given total, as non-increasing block lists.
    std::function<void(std::vector<int>, int, int)> rec = [&](std::vector<int> blocks, int left, int cap) {
      if (left == 0) {
        const BlockShape shape(blocks);
        const double v = evaluate_exact(*corpus_formula("phi_c"), shape)->value;
        const bool commutative = std::all_of(blocks.begin(), blocks.end(), [](int n) { return n == 1; });
        CHECK(v == (commutative ? 0.0 : 2.0));
        return;
      }
      for (int n = std::min(left, cap); n >= 1; --n) {
        auto next = blocks;
        next.push_back(n);
        rec(next, left - n, n);
      }
    };
    rec({}, total, total);
  }
}

TEST_CASE("evaluate dispatches to the registry first") {
  const EvalResult r = evaluate(*corpus_formula("phi_c"), BlockShape::parse("M2"));
  CHECK(r.exact);
  CHECK(r.value == 2.0);
  const EvalResult h = evaluate(*corpus_formula("highly_irreducible"), BlockShape::parse("M1"));
  CHECK_FALSE(h.exact);
  CHECK(h.value == 0.0);
}

TEST_CASE("bound tags follow polarity") {
  const BlockShape m2 = BlockShape::parse("M2");
  const EvalConfig cfg = budget(4, 2, 20);
  CHECK(evaluate_numeric(*parse("sup p:proj . norm(p)"), m2, cfg).bound == BoundKind::LowerBoundOfTrueValue);
  CHECK(evaluate_numeric(*parse("inf u:unitary . norm(u + I)"), m2, cfg).bound == BoundKind::UpperBoundOfTrueValue);
  CHECK(evaluate_numeric(*parse("inf p:proj . sup x:ball . norm(p*x)"), m2, cfg).bound == BoundKind::Estimate);
  CHECK(evaluate_numeric(*parse("abs(1 - (sup x:ball . norm(x)))"), m2, cfg).bound == BoundKind::Estimate);
}

TEST_CASE("sentences only") {
  const FormulaPtr open = parse_open("sup x:ball . norm(x*y)", {"y"});
  CHECK_THROWS_AS(evaluate_numeric(*open, BlockShape::parse("M2")), ValidationError);
  EvalConfig bad;
  bad.restarts = 0;
  CHECK_THROWS_AS(evaluate_numeric(*corpus_formula("phi_c"), BlockShape::parse("M2"), bad), ValidationError);
}

TEST_CASE("witnesses reproduce the value") {
  const FormulaPtr core = parse_open("norm(x*y - y*x)", {"x", "y"});
  for (const char* d : {"M2", "M1+M2", "M3"}) {
    const BlockShape shape = BlockShape::parse(d);
    const EvalResult r = evaluate_numeric(*corpus_formula("phi_c"), shape);
    REQUIRE(r.witnesses.size() == 2);
    CHECK(r.witnesses[0].var == "x");
    CHECK(evaluate_at(*core, shape, r.witnesses) == doctest::Approx(r.value).epsilon(1e-9));
    // Witnesses are genuine contractions, so the bound is a true lower bound.
    for (const auto& w : r.witnesses) CHECK(oracle::svd_norm(std::get<Element>(w.value)) <= 1.0 + 1e-12);
  }
  // Projection witnesses are snapped and still reproduce the value.
  const BlockShape shape = BlockShape::parse("M2+M1");
  const FormulaPtr f = parse("sup p:proj . sup x:ball . norm(p*x - x*p)");
  const EvalResult r = evaluate_numeric(*f, shape, budget(16, 4, 100));
  REQUIRE(r.witnesses.size() == 2);
  const Element& p = std::get<Element>(r.witnesses[0].value);
  CHECK(oracle::svd_norm(Element(p * p - p)) <= 1e-12);
  const FormulaPtr pcore = parse_open("norm(p*x - x*p)", {"p", "x"});
  CHECK(evaluate_at(*pcore, shape, r.witnesses) == doctest::Approx(r.value).epsilon(1e-9));
}

TEST_CASE("more restarts never worsen a one-polarity bound") {
  const BlockShape m2 = BlockShape::parse("M2");
  const BlockShape m3 = BlockShape::parse("M3");
  const FormulaPtr sup_f = corpus_formula("phi_c");
  const FormulaPtr inf_f = parse("inf u:unitary . inf p:proj_nz . norm(u*p - p*u) + norm(u - 0.5*I)");
  for (std::uint64_t seed : {1ULL, 7ULL, 99ULL}) {
    double prev_sup = -1.0, prev_inf = 1e9;
    for (int r = 1; r <= 32; r *= 2) {
      EvalConfig cfg = budget(r, 2, 30);
      cfg.seed = seed;
      const double vs = evaluate_numeric(*sup_f, m3, cfg).value;
      const double vi = evaluate_numeric(*inf_f, m2, cfg).value;
      CHECK(vs >= prev_sup);
      CHECK(vi <= prev_inf);
      prev_sup = vs;
      prev_inf = vi;
    }
  }
}

TEST_CASE("evaluation is deterministic") {
  const BlockShape shape = BlockShape::parse("M1+M2");
  const FormulaPtr f = corpus_formula("highly_irreducible");
  const EvalConfig cfg = budget(8, 4, 20);
  const EvalResult a = evaluate_numeric(*f, shape, cfg);
  const EvalResult b = evaluate_numeric(*f, shape, cfg);
  CHECK(a.value == b.value);
  REQUIRE(a.witnesses.size() == b.witnesses.size());
  for (std::size_t i = 0; i < a.witnesses.size(); ++i) {
    CHECK(distance(std::get<Element>(a.witnesses[i].value), std::get<Element>(b.witnesses[i].value)) == 0.0);
  }
}

TEST_CASE("scalar range and norm encodings agree") {
  // psi evaluated on a dense grid of [0,1] is the oracle for both encodings.
  struct Case {
    const char* scalar;
    const char* normed;
    std::function<double(double)> psi;
    bool is_sup;
  };
  const std::vector<Case> cases = {
      {"sup l:interval(0,1) . norm(l*I - 0.5*I)", "sup x:ball . abs(norm(x) - 0.5)",
       [](double t) { return std::abs(t - 0.5); }, true},
      {"sup l:interval(0,1) . norm(l*(l*I - 0.7*I))", "sup x:ball . norm(x) * abs(norm(x) - 0.7)",
       [](double t) { return t * std::abs(t - 0.7); }, true},
      {"sup l:interval(0,1) . min(norm(l*I), norm(l*I - I))", "sup x:ball . min(norm(x), abs(norm(x) - 1))",
       [](double t) { return std::min(t, std::abs(t - 1.0)); }, true},
      {"inf l:interval(0,1) . norm(l*I - 0.3*I) + 0.2", "inf x:ball . abs(norm(x) - 0.3) + 0.2",
       [](double t) { return std::abs(t - 0.3) + 0.2; }, false},
  };
  for (const auto& c : cases) {
    double grid = c.is_sup ? -1e300 : 1e300;
    for (int k = 0; k <= 10000; ++k) {
      const double v = c.psi(k / 10000.0);
      grid = c.is_sup ? std::max(grid, v) : std::min(grid, v);
    }
    for (const char* d : {"M1", "C^2", "M2", "M1+M2", "C^3", "M3"}) {
      CAPTURE(c.scalar);
      CAPTURE(d);
      const BlockShape shape = BlockShape::parse(d);
      const double vs = evaluate_numeric(*parse(c.scalar), shape).value;
      const double vn = evaluate_numeric(*parse(c.normed), shape).value;
      CHECK(std::abs(vs - vn) <= 5e-2);
      CHECK(std::abs(vs - grid) <= 1e-6);
    }
  }
}

TEST_CASE("result JSON") {
  const BlockShape shape = BlockShape::parse("M2");
  const EvalResult r = evaluate_numeric(*corpus_formula("phi_c"), shape, budget(4, 2, 20));
  const auto j = result_to_json(r, "phi_c", shape);
  for (const char* k : {"formula", "algebra", "value", "bound", "exact", "witnesses", "seed", "config"}) {
    CHECK(j.contains(k));
  }
  CHECK(j["algebra"] == "M2");
  CHECK(j["bound"] == "lower");
  CHECK(j["witnesses"].size() == 2);
  CHECK(j["witnesses"][0]["var"] == "x");
  CHECK(j["config"]["restarts"] == 4);
  const EvalResult s = evaluate_numeric(*parse("sup l:disk . norm(l*I)"), shape, budget(4, 2, 20));
  const auto js = result_to_json(s, "disk", shape);
  CHECK(js["witnesses"][0]["scalar"].size() == 2);
  CHECK(js["value"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("CSL_SEED supplies the default seed") {
  ::setenv("CSL_SEED", "12345", 1);
  CHECK(seed_from_environment() == 12345u);
  ::setenv("CSL_SEED", "abc", 1);
  CHECK_THROWS_AS(seed_from_environment(), ValidationError);
  ::unsetenv("CSL_SEED");
  CHECK(seed_from_environment(9) == 9u);
}
