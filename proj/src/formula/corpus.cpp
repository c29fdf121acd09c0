#include "csw/formula/corpus.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "csw/algebra/shape.hpp"
#include "csw/formula/parser.hpp"
#include "csw/formula/printer.hpp"

namespace csw::formula {

int dixmier_depth(int n) {
  if (n < 1) throw ValidationError("dixmier sentences are indexed by n ≥ 1");
  const double target = 1.0 / (2.0 * n);
  int k = 0;
  double v = 1.0;
  while (!(v < target)) {
    v *= 0.75;
    ++k;
  }
  return k;
}

std::vector<Complex> disk_net(double delta) {
  if (!(delta > 0.0)) throw ValidationError("net spacing must be positive");
  std::vector<Complex> pts{Complex(0.0, 0.0)};
  const int rings = static_cast<int>(std::ceil(1.0 / delta - 1e-12));
  for (int j = 1; j <= rings; ++j) {
    const double r = std::min(1.0, j * delta);
    const int m = static_cast<int>(std::ceil(2.0 * std::numbers::pi * r / delta - 1e-12));
    for (int t = 0; t < m; ++t) pts.push_back(std::polar(r, 2.0 * std::numbers::pi * t / m));
  }
  return pts;
}

FormulaPtr dixmier_sentence(int n) {
  const int k = dixmier_depth(n);
  const int units = 1 << k;
  const int d = static_cast<int>(disk_net(1.0 / (2.0 * n)).size());
  const double w = std::ldexp(1.0, -k);

  TermPtr x = variable("x");
  TermPtr avg;
  for (int i = 1; i <= units; ++i) {
    TermPtr u = variable("u" + std::to_string(i));
    TermPtr conj = scale(w, product(product(adjoint(u), x), u));
    avg = avg ? sum(avg, conj) : conj;
  }
  TermPtr z;
  for (int j = 1; j <= d; ++j) {
    TermPtr lp = product(variable("l" + std::to_string(j)), variable("p" + std::to_string(j)));
    z = z ? sum(z, lp) : lp;
  }
  FormulaPtr body = norm(difference(avg, z));
  for (int j = d; j >= 1; --j) body = inf("l" + std::to_string(j), Sort::of(SortKind::ScalarDisk), body);
  for (int j = d; j >= 1; --j) body = inf("p" + std::to_string(j), Sort::of(SortKind::CentralProjection), body);
  for (int i = units; i >= 1; --i) body = inf("u" + std::to_string(i), Sort::of(SortKind::Unitary), body);
  FormulaPtr psi = sup("x", Sort::of(SortKind::SelfAdjointBall), body);
  const double bound = 1.0 / n;
  return abs_diff(max_of(psi, constant(bound)), constant(bound));
}

namespace {

struct Source {
  const char* name;
  const char* origin;
  const char* text;
};

// Sentence texts mirror the displayed formulas; see README for the two
// places where the shipped form differs from the displayed one.
const Source kSources[] = {
    {"phi_u", "unital algebras: the unit sentence",
     "inf e:ball . sup x:ball . norm(e*x - x) + norm(x*e - x)"},
    {"phi_c", "commutative algebras: the commutator sentence", "sup x:ball . sup y:ball . norm(x*y - y*x)"},
    {"comm_pc_axiom4",
     "commutative pseudocompact axioms: every element approximately normed by a minimal projection",
     "sup x:ball . inf p:proj . sup y:ball . inf l:disk . norm(p*y*p - l*p) + abs(norm(x) - norm(x*p))"},
    {"minimal_iff_corner", "a nonzero projection is minimal iff its corner is the scalars",
     "sup p:proj_nz . (sup a:ball . inf l:disk . norm(p*a*p - l*p)) * "
     "(inf q:proj_nz . norm(p*q - q) + abs(norm(p - q) - 1))"},
    {"dominates_minimal", "every nonzero projection dominates a minimal projection",
     "sup q:proj_nz . inf p:proj_nz . sup a:ball . inf l:disk . norm(p*a*p - l*p) + norm(q*p - p)"},
    {"dominates_minimal_pm", "dominating a minimal projection, pseudomatricial variant",
     "inf p:proj_nz . sup q:proj_nz . inf v:pisom . norm(adj(v)*v - p) + norm(q*(v*adj(v)) - v*adj(v))"},
    {"decompose_d2", "identity as two equivalent projections plus an abelian projection (d = 2)",
     "inf v:pisom . inf p:proj . norm(I - (adj(v)*v + v*adj(v) + p)) + "
     "(sup x:ball . sup y:ball . norm(p*x*p*y*p - p*y*p*x*p))"},
    {"dixmier_1", "Dixmier property sentence, n = 1", nullptr},
    {"central_proj_exists", "trivial centre: existence of a nontrivial central projection",
     "inf p:proj . abs(norm(p - I) - 1) + abs(norm(p) - 1) + (sup x:ball . norm(p*x - x*p))"},
    {"comparability", "projections totally ordered by Murray-von Neumann subequivalence",
     "sup p:proj . sup q:proj . inf x:pisom . (norm(p - adj(x)*x) + norm(x*adj(x)*q - x*adj(x))) * "
     "(norm(q - adj(x)*x) + norm(x*adj(x)*p - x*adj(x)))"},
    {"highly_irreducible", "highly irreducible matrices: a contraction far from commuting with nontrivial projections",
     "sup a:ball . inf p:proj_nt . norm(a*p - p*a)"},
};

std::vector<CorpusEntry> build() {
  std::vector<CorpusEntry> out;
  for (const auto& s : kSources) {
    CorpusEntry e;
    e.name = s.name;
    e.origin = s.origin;
    if (s.text != nullptr) {
      e.text = s.text;
      e.formula = parse(e.text);
    } else {
      e.formula = dixmier_sentence(1);
      e.text = to_string(*e.formula);
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

const std::vector<CorpusEntry>& corpus() {
  static const std::vector<CorpusEntry> entries = build();
  return entries;
}

const CorpusEntry& corpus_entry(const std::string& name) {
  for (const auto& e : corpus()) {
    if (e.name == name) return e;
  }
  static std::mutex mu;
  static std::map<int, std::unique_ptr<CorpusEntry>> extra;
  if (name.rfind("dixmier_", 0) == 0 && name.size() > 8) {
    int n = 0;
    try {
      std::size_t used = 0;
      n = std::stoi(name.substr(8), &used);
      if (used != name.size() - 8) n = 0;
    } catch (const std::exception&) {
      n = 0;
    }
    if (n >= 1) {
      std::lock_guard lock(mu);
      auto& slot = extra[n];
      if (!slot) {
        slot = std::make_unique<CorpusEntry>();
        slot->name = name;
        slot->origin = "Dixmier property sentence, n = " + std::to_string(n);
        slot->formula = dixmier_sentence(n);
        slot->text = to_string(*slot->formula);
      }
      return *slot;
    }
  }
  throw ValidationError("unknown corpus sentence '" + name + "'");
}

FormulaPtr corpus_formula(const std::string& name) { return corpus_entry(name).formula; }

}  // namespace csw::formula
