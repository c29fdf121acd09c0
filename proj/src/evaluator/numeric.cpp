// Numeric evaluation by nested derivative-free search.
//
// A formula is compiled into nodes whose variables live in numbered slots.
// Runs of quantifiers of one kind form a single block searched jointly over
// the product of the sorts' charts: finitely many branch combinations, each
// a box of real parameters.
//
// Every evaluation carries a window (lo, hi). Inside the window the returned
// value is the searched value; outside it is only guaranteed to lie on the
// correct side, which is what lets a sup stop as soon as it reaches hi and an
// inf as soon as it drops to lo. A block narrows the window for its body to
// the value of the current start, so a restart's accept/reject decisions are
// the same as in an unwindowed search.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <unordered_map>
#include <numbers>
#include <set>
#include <random>

#include "csw/algebra/linalg.hpp"
#include "csw/evaluator/evaluate.hpp"

namespace csw {

using namespace formula;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxEnumerated = 512;
// Local search: share of single-coordinate moves, step-size factors on success
// and failure, and parameters per perturbation trial of one iteration.
constexpr double kCoordinateShare = 0.6;
constexpr double kGrow = 1.5;
constexpr double kShrink = 0.93;
constexpr int kParamsPerTrial = 8;

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t block, std::uint64_t combo, std::uint64_t restart) {
  std::uint64_t h = splitmix(seed);
  h = splitmix(h ^ block);
  h = splitmix(h ^ combo);
  h = splitmix(h ^ restart);
  return std::mt19937_64(h);
}

struct CTerm {
  TermKind kind;
  int slot = -1;
  Complex coeff{};
  std::unique_ptr<CTerm> a, b;
  mutable std::vector<Matrix> buf;  // per block
};

struct Node {
  FormulaKind kind;
  std::unique_ptr<CTerm> term;
  double value = 0.0;
  int a = -1, b = -1;
  int weight = 0;  // quantifiers underneath

  // Quantifier blocks.
  bool is_sup = false;
  std::vector<int> slots;
  std::vector<std::string> names;
  std::vector<SortChart> charts;
  int body = -1;
  int depth = 0;

  // A block whose free variables all range over finite sorts is a function
  // on finitely many points and is cached without a window.
  bool cached = false;
  std::vector<int> free_slots;
  std::unordered_map<std::string, double> cache;
};

bool is_projection_like(SortKind k) {
  return k == SortKind::Projection || k == SortKind::NonzeroProjection || k == SortKind::NontrivialProjection ||
         k == SortKind::CentralProjection;
}

// Miniscoping. Every formula value is nonnegative and the connectives Sum,
// Max, Min and Product are monotone in each argument, so a quantifier can move
// onto the only operand that mentions its variable:
//   sup x . (A(x) + B) = (sup x . A(x)) + B,
// and past a quantifier of the same kind. Quantifiers over sorts that are
// empty on the shape stay where they are, since they evaluate to 0.
class Miniscoper {
 public:
  explicit Miniscoper(const BlockShape& shape) : shape_(shape) {}

  FormulaPtr run(const Formula& f) {
    switch (f.kind) {
      case FormulaKind::Norm:
      case FormulaKind::Constant: return std::make_shared<Formula>(f);
      case FormulaKind::Scale: return scale(f.value, run(*f.lhs));
      case FormulaKind::Sup:
      case FormulaKind::Inf: return quantify(f.kind, f.var, f.sort, run(*f.body));
      default: return rebuild(f.kind, run(*f.lhs), run(*f.rhs));
    }
  }

 private:
  const BlockShape& shape_;

  static FormulaPtr rebuild(FormulaKind k, FormulaPtr a, FormulaPtr b) {
    switch (k) {
      case FormulaKind::Sum: return add(std::move(a), std::move(b));
      case FormulaKind::Product: return multiply(std::move(a), std::move(b));
      case FormulaKind::AbsDiff: return abs_diff(std::move(a), std::move(b));
      case FormulaKind::Max: return max_of(std::move(a), std::move(b));
      default: return min_of(std::move(a), std::move(b));
    }
  }

  static FormulaPtr quantifier(FormulaKind k, const std::string& x, const Sort& sort, FormulaPtr body) {
    return k == FormulaKind::Sup ? sup(x, sort, std::move(body)) : inf(x, sort, std::move(body));
  }

  FormulaPtr quantify(FormulaKind k, const std::string& x, const Sort& sort, FormulaPtr body) {
    if (SortChart(sort, shape_).empty()) return quantifier(k, x, sort, std::move(body));
    if (FormulaPtr pushed = push(k, x, sort, body)) return pushed;
    return quantifier(k, x, sort, std::move(body));
  }

  // Q x . f with the quantifier moved strictly inward, or null.
  FormulaPtr push(FormulaKind k, const std::string& x, const Sort& sort, const FormulaPtr& f) {
    if (!free_variables(*f).contains(x)) return f;
    switch (f->kind) {
      case FormulaKind::Scale: return scale(f->value, quantify(k, x, sort, f->lhs));
      case FormulaKind::Sum:
      case FormulaKind::Product:
      case FormulaKind::Max:
      case FormulaKind::Min: {
        const bool in_a = free_variables(*f->lhs).contains(x);
        const bool in_b = free_variables(*f->rhs).contains(x);
        if (in_a && !in_b) return rebuild(f->kind, quantify(k, x, sort, f->lhs), f->rhs);
        if (in_b && !in_a) return rebuild(f->kind, f->lhs, quantify(k, x, sort, f->rhs));
        return nullptr;
      }
      case FormulaKind::Sup:
      case FormulaKind::Inf: {
        if (f->kind != k) return nullptr;
        FormulaPtr inner = push(k, x, sort, f->body);
        if (!inner) return nullptr;
        return quantifier(k, f->var, f->sort, std::move(inner));
      }
      default: return nullptr;
    }
  }
};

class Machine {
 public:
  Machine(const Formula& f, const BlockShape& shape, const EvalConfig& cfg,
          const std::vector<Witness>& free = {})
      : shape_(shape), cfg_(cfg) {
    for (const auto& w : free) {
      scope_.emplace_back(w.var, static_cast<int>(env_.size()));
      env_.push_back(w.value);
      finite_slot_.push_back(1);
    }
    root_ = compile(*miniscope(f), 0);
  }

  double run() { return eval(root_, -kInf, kInf); }

  const Node& root() const { return nodes_[static_cast<std::size_t>(root_)]; }
  const std::vector<Value>& root_witness() const { return witness_; }

 private:
  BlockShape shape_;
  EvalConfig cfg_;
  std::vector<Node> nodes_;
  std::vector<std::pair<std::string, int>> scope_;
  std::vector<Value> env_;
  std::vector<char> finite_slot_;  // bound by a zero-dimensional chart
  int root_ = -1;
  std::vector<Value> witness_;

  FormulaPtr miniscope(const Formula& f) const { return Miniscoper(shape_).run(f); }

  // ---- compilation -----------------------------------------------------

  int lookup(const std::string& name) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->first == name) return it->second;
    }
    throw ValidationError("free variable '" + name + "' in a sentence");
  }

  std::unique_ptr<CTerm> compile_term(const Term& t) {
    auto c = std::make_unique<CTerm>();
    c->kind = t.kind;
    for (int n : shape_.blocks()) {
      c->buf.push_back(t.kind == TermKind::Identity ? Matrix(Matrix::Identity(n, n)) : Matrix(Matrix::Zero(n, n)));
    }
    switch (t.kind) {
      case TermKind::Variable: c->slot = lookup(t.name); break;
      case TermKind::Identity:
      case TermKind::Zero: break;
      case TermKind::Scale:
        c->coeff = t.coeff;
        c->a = compile_term(*t.lhs);
        break;
      case TermKind::Adjoint: c->a = compile_term(*t.lhs); break;
      case TermKind::Sum:
      case TermKind::Product:
        c->a = compile_term(*t.lhs);
        c->b = compile_term(*t.rhs);
        break;
    }
    return c;
  }

  int compile(const Formula& f, int depth) {
    Node n;
    n.kind = f.kind;
    switch (f.kind) {
      case FormulaKind::Norm: n.term = compile_term(*f.term); break;
      case FormulaKind::Constant: n.value = f.value; break;
      case FormulaKind::Scale:
        n.value = f.value;
        n.a = compile(*f.lhs, depth);
        n.weight = nodes_[static_cast<std::size_t>(n.a)].weight;
        break;
      case FormulaKind::Sup:
      case FormulaKind::Inf: {
        n.is_sup = f.kind == FormulaKind::Sup;
        n.depth = depth;
        n.cached = depth > 0;
        for (const auto& v : free_variables(f)) {
          const int slot = lookup(v);
          n.free_slots.push_back(slot);
          if (!finite_slot_[static_cast<std::size_t>(slot)]) n.cached = false;
        }
        if (n.free_slots.empty()) n.cached = false;
        const Formula* cur = &f;
        std::size_t pushed = 0;
        while (cur->kind == f.kind) {
          const int slot = static_cast<int>(env_.size());
          env_.emplace_back(Complex(0.0));
          scope_.emplace_back(cur->var, slot);
          ++pushed;
          n.slots.push_back(slot);
          n.names.push_back(cur->var);
          n.charts.emplace_back(cur->sort, shape_);
          finite_slot_.push_back(n.charts.back().max_dimension() == 0 ? 1 : 0);
          cur = cur->body.get();
        }
        n.body = compile(*cur, depth + 1);
        scope_.resize(scope_.size() - pushed);
        n.weight = nodes_[static_cast<std::size_t>(n.body)].weight + static_cast<int>(pushed);
        break;
      }
      default:
        n.a = compile(*f.lhs, depth);
        n.b = compile(*f.rhs, depth);
        n.weight = nodes_[static_cast<std::size_t>(n.a)].weight + nodes_[static_cast<std::size_t>(n.b)].weight;
    }
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }

  // ---- terms -------------------------------------------------------------

  // Block i of a term, in the node's own buffer unless it is a variable's.
  const Matrix& term_block(const CTerm& t, std::size_t i) const {
    Matrix& out = t.buf[i];
    switch (t.kind) {
      case TermKind::Variable: {
        const Value& v = env_[static_cast<std::size_t>(t.slot)];
        if (const Element* e = std::get_if<Element>(&v)) return e->block(i);
        out.setIdentity();
        out *= std::get<Complex>(v);
        return out;
      }
      case TermKind::Identity:
      case TermKind::Zero: return out;
      case TermKind::Scale: out = t.coeff * term_block(*t.a, i); return out;
      case TermKind::Adjoint: out = term_block(*t.a, i).adjoint(); return out;
      case TermKind::Sum: out = term_block(*t.a, i) + term_block(*t.b, i); return out;
      case TermKind::Product: out.noalias() = term_block(*t.a, i) * term_block(*t.b, i); return out;
    }
    return out;
  }

  // Degree of a term in a scalar slot; adjoints of terms that involve it
  // count as nonlinear.
  static int degree(const CTerm& t, int slot) {
    switch (t.kind) {
      case TermKind::Variable: return t.slot == slot ? 1 : 0;
      case TermKind::Identity:
      case TermKind::Zero: return 0;
      case TermKind::Scale: return degree(*t.a, slot);
      case TermKind::Adjoint: return degree(*t.a, slot) == 0 ? 0 : 2;
      case TermKind::Sum: return std::max(degree(*t.a, slot), degree(*t.b, slot));
      case TermKind::Product: return degree(*t.a, slot) + degree(*t.b, slot);
    }
    return 2;
  }

  double norm_of(const CTerm& t) const {
    double best = 0.0;
    for (std::size_t i = 0; i < shape_.num_blocks(); ++i) best = std::max(best, linalg::spectral_norm(term_block(t, i)));
    return best;
  }

  // ---- formulas ----------------------------------------------------------

  double eval(int id, double lo, double hi) {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    switch (n.kind) {
      case FormulaKind::Norm: return norm_of(*n.term);
      case FormulaKind::Constant: return n.value;
      case FormulaKind::Scale: {
        if (n.value == 0.0) return 0.0;
        return n.value * eval(n.a, lo / n.value, hi / n.value);
      }
      case FormulaKind::Sum: {
        const auto [first, second] = order(n);
        const double va = eval(first, -kInf, hi);
        if (va >= hi) return va;
        return va + eval(second, lo - va, hi - va);
      }
      case FormulaKind::Product: {
        const auto [first, second] = order(n);
        const double va = eval(first, -kInf, kInf);
        if (va == 0.0) return 0.0;
        return va * eval(second, lo / va, hi / va);
      }
      case FormulaKind::AbsDiff: return std::abs(eval(n.a, -kInf, kInf) - eval(n.b, -kInf, kInf));
      case FormulaKind::Max: {
        const auto [first, second] = order(n);
        const double va = eval(first, -kInf, hi);
        if (va >= hi) return va;
        return std::max(va, eval(second, std::max(lo, va), hi));
      }
      case FormulaKind::Min: {
        const auto [first, second] = order(n);
        const double va = eval(first, lo, kInf);
        if (va <= lo) return va;
        return std::min(va, eval(second, lo, std::min(hi, va)));
      }
      case FormulaKind::Sup:
      case FormulaKind::Inf: return n.cached ? eval_cached(id) : eval_block(id, lo, hi);
    }
    return 0.0;
  }

  double eval_cached(int id) {
    std::string key;
    for (int slot : nodes_[static_cast<std::size_t>(id)].free_slots) {
      const Value& v = env_[static_cast<std::size_t>(slot)];
      if (const Element* e = std::get_if<Element>(&v)) {
        for (const auto& blk : e->blocks()) {
          key.append(reinterpret_cast<const char*>(blk.data()), sizeof(Complex) * static_cast<std::size_t>(blk.size()));
        }
      } else {
        const Complex z = std::get<Complex>(v);
        key.append(reinterpret_cast<const char*>(&z), sizeof z);
      }
    }
    auto& cache = nodes_[static_cast<std::size_t>(id)].cache;
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    const double v = eval_block(id, -kInf, kInf);
    nodes_[static_cast<std::size_t>(id)].cache.emplace(std::move(key), v);
    return v;
  }

  std::pair<int, int> order(const Node& n) const {
    const int wa = nodes_[static_cast<std::size_t>(n.a)].weight;
    const int wb = nodes_[static_cast<std::size_t>(n.b)].weight;
    return wb < wa ? std::make_pair(n.b, n.a) : std::make_pair(n.a, n.b);
  }

  // ---- quantifier blocks -------------------------------------------------

  struct Budget {
    int restarts;
    int steps;
  };

  Budget budget(int depth) const {
    const double decay = cfg_.nest_budget_decay;
    Budget b{};
    b.restarts = depth == 0 ? cfg_.restarts
                            : std::max(1, static_cast<int>(std::lround(cfg_.inner_restarts * std::pow(decay, depth - 1))));
    b.steps = std::max(1, static_cast<int>(std::lround(cfg_.local_steps * std::pow(decay, depth))));
    return b;
  }

  struct Search {
    const Node* node;
    int id;
    double lo, hi;
    double best;
    bool record;
    std::vector<std::size_t> branch;  // per variable
    std::vector<int> offset;          // parameter offset per variable
    std::vector<double> params;

    bool better(double a, double b) const { return node->is_sup ? a > b : a < b; }
    bool done(double v) const { return node->is_sup ? v >= hi : (v <= lo || v <= 0.0); }
    // Window for the body while the current start sits at fx.
    double wlo(double fx) const { return node->is_sup ? std::max(lo, fx) : lo; }
    double whi(double fx) const { return node->is_sup ? hi : std::min(hi, fx); }
  };

  void layout(Search& s) const {
    const Node& n = *s.node;
    s.offset.resize(n.charts.size());
    int off = 0;
    for (std::size_t j = 0; j < n.charts.size(); ++j) {
      s.offset[j] = off;
      off += n.charts[j].dimension(s.branch[j]);
    }
    s.params.assign(static_cast<std::size_t>(off), 0.0);
  }

  void set_var(const Search& s, std::size_t j) {
    const Node& n = *s.node;
    const int dim = n.charts[j].dimension(s.branch[j]);
    std::span<const double> p(s.params.data() + s.offset[j], static_cast<std::size_t>(dim));
    env_[static_cast<std::size_t>(n.slots[j])] = n.charts[j].point(s.branch[j], p);
  }

  void set_all(const Search& s) {
    for (std::size_t j = 0; j < s.node->charts.size(); ++j) set_var(s, j);
  }

  void offer(Search& s, double v) {
    if (!s.better(v, s.best)) return;
    s.best = v;
    if (s.record) {
      witness_.clear();
      for (int slot : s.node->slots) witness_.push_back(env_[static_cast<std::size_t>(slot)]);
    }
  }

  double eval_block(int id, double lo, double hi) {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    for (const auto& c : n.charts) {
      if (c.empty()) return 0.0;
    }
    Search s{&n, id, lo, hi, n.is_sup ? -kInf : kInf, id == root_, {}, {}, {}};
    s.branch.assign(n.charts.size(), 0);
    const Budget b = budget(n.depth);

    if (n.charts.size() == 1 && n.charts[0].sort().is_scalar()) {
      scalar_search(s, b);
      return s.best;
    }

    std::size_t combos = 1;
    for (const auto& c : n.charts) {
      combos = combos > kMaxEnumerated ? combos : combos * c.num_branches();
    }

    if (combos <= kMaxEnumerated) {
      std::vector<std::size_t> order_zero, order_cont;
      for (std::size_t c = 0; c < combos; ++c) {
        decode(s, c);
        int dim = 0;
        for (std::size_t j = 0; j < n.charts.size(); ++j) dim += n.charts[j].dimension(s.branch[j]);
        (dim == 0 ? order_zero : order_cont).push_back(c);
      }
      for (std::size_t c : order_zero) {
        decode(s, c);
        layout(s);
        set_all(s);
        offer(s, eval(n.body, s.wlo(s.best), s.whi(s.best)));
        if (s.done(s.best)) return s.best;
      }
      if (order_cont.empty()) return s.best;
      const int per = std::max<int>(1, static_cast<int>((b.restarts + order_cont.size() - 1) / order_cont.size()));
      for (std::size_t c : order_cont) {
        for (int r = 0; r < per; ++r) {
          decode(s, c);
          layout(s);
          auto rng = stream(cfg_.seed, static_cast<std::uint64_t>(id), c, static_cast<std::uint64_t>(r));
          start(s, r == 0, rng);
          descend(s, b.steps, false, rng);
          if (s.done(s.best)) return s.best;
        }
      }
      return s.best;
    }

    // Too many branch combinations: each start draws one at random, and
    // discrete-only variables are also mutated during the local search.
    for (int r = 0; r < b.restarts; ++r) {
      auto rng = stream(cfg_.seed, static_cast<std::uint64_t>(id), 0, static_cast<std::uint64_t>(r));
      for (std::size_t j = 0; j < n.charts.size(); ++j) {
        if (r == 0) {
          s.branch[j] = 0;
        } else {
          std::uniform_int_distribution<std::size_t> pick(0, n.charts[j].num_branches() - 1);
          s.branch[j] = pick(rng);
        }
      }
      layout(s);
      start(s, r == 0, rng);
      descend(s, b.steps, true, rng);
      if (s.done(s.best)) return s.best;
    }
    return s.best;
  }

  void decode(Search& s, std::size_t combo) const {
    const Node& n = *s.node;
    for (std::size_t j = n.charts.size(); j-- > 0;) {
      const std::size_t k = n.charts[j].num_branches();
      s.branch[j] = combo % k;
      combo /= k;
    }
  }

  void start(Search& s, bool anchored, std::mt19937_64& rng) {
    const Node& n = *s.node;
    for (std::size_t j = 0; j < n.charts.size(); ++j) {
      std::span<double> p(s.params.data() + s.offset[j], static_cast<std::size_t>(n.charts[j].dimension(s.branch[j])));
      if (anchored) {
        n.charts[j].anchor(s.branch[j], p);
      } else {
        n.charts[j].random(s.branch[j], rng, p);
      }
    }
  }

  // (1+1) evolution strategy from the current start. After an accepted random
  // move the next trial doubles it.
  void descend(Search& s, int steps, bool mutate_discrete, std::mt19937_64& rng) {
    const Node& n = *s.node;
    set_all(s);
    double fx = eval(n.body, s.lo, s.hi);
    offer(s, fx);
    if (s.done(fx)) return;

    std::vector<std::size_t> discrete;
    if (mutate_discrete) {
      for (std::size_t j = 0; j < n.charts.size(); ++j) {
        if (n.charts[j].max_dimension() == 0 && n.charts[j].num_branches() > 1) discrete.push_back(j);
      }
    }
    const std::size_t dim = s.params.size();
    if (dim == 0 && discrete.empty()) return;

    // Owner variable of each parameter.
    std::vector<std::size_t> owner(dim);
    for (std::size_t j = 0; j < n.charts.size(); ++j) {
      for (int k = 0; k < n.charts[j].dimension(s.branch[j]); ++k) owner[static_cast<std::size_t>(s.offset[j] + k)] = j;
    }

    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double sigma = cfg_.step_scale;
    const double sigma_max = 4.0 * cfg_.step_scale;
    std::vector<double> saved_params;
    std::vector<std::size_t> changed;
    std::vector<Value> saved_values;
    std::vector<double> delta(dim, 0.0);
    bool momentum = false;

    // One iteration is a trial per kParamsPerTrial parameters, so the search
    // length scales with the dimension as the convergence rate does.
    const long trials = static_cast<long>(steps) * std::max<long>(1, (static_cast<long>(dim) + kParamsPerTrial - 1) / kParamsPerTrial);
    for (long step = 0; step < trials; ++step) {
      saved_params = s.params;
      changed.clear();
      bool discrete_move = false, momentum_move = false;
      std::size_t old_branch = 0, moved = 0;
      const double roll = u(rng);
      if (momentum) {
        // Extrapolate along the last accepted move.
        momentum_move = true;
        std::vector<char> touched(n.charts.size(), 0);
        for (std::size_t k = 0; k < dim; ++k) {
          if (delta[k] == 0.0) continue;
          delta[k] *= 2.0;
          s.params[k] += delta[k];
          touched[owner[k]] = 1;
        }
        for (std::size_t j = 0; j < n.charts.size(); ++j) if (touched[j]) changed.push_back(j);
      } else if (!discrete.empty() && (dim == 0 || roll < 0.25)) {
        discrete_move = true;
        moved = discrete[std::uniform_int_distribution<std::size_t>(0, discrete.size() - 1)(rng)];
        old_branch = s.branch[moved];
        s.branch[moved] = std::uniform_int_distribution<std::size_t>(0, n.charts[moved].num_branches() - 1)(rng);
        changed.push_back(moved);
      } else if (roll < kCoordinateShare) {
        const std::size_t k = std::uniform_int_distribution<std::size_t>(0, dim - 1)(rng);
        s.params[k] += sigma * g(rng);
        changed.push_back(owner[k]);
      } else {
        const double scale = sigma / std::sqrt(static_cast<double>(dim));
        for (auto& x : s.params) x += scale * g(rng);
        for (std::size_t j = 0; j < n.charts.size(); ++j) changed.push_back(j);
      }

      saved_values.clear();
      for (std::size_t j : changed) {
        saved_values.push_back(env_[static_cast<std::size_t>(n.slots[j])]);
        set_var(s, j);
      }
      const double fy = eval(n.body, s.wlo(fx), s.whi(fx));
      if (s.better(fy, fx)) {
        fx = fy;
        offer(s, fx);
        if (!discrete_move) {
          if (!momentum_move) {
            for (std::size_t k = 0; k < dim; ++k) delta[k] = s.params[k] - saved_params[k];
            sigma = std::min(sigma * kGrow, sigma_max);
          }
          momentum = true;
        }
        if (s.done(fx)) return;
      } else {
        s.params = saved_params;
        if (discrete_move) s.branch[moved] = old_branch;
        for (std::size_t i = 0; i < changed.size(); ++i) {
          env_[static_cast<std::size_t>(n.slots[changed[i]])] = std::move(saved_values[i]);
        }
        if (momentum_move) {
          momentum = false;
        } else if (!discrete_move) {
          sigma *= kShrink;
        }
      }
    }
  }

  // A lone scalar quantifier: grid, then compass refinement of the best point.
  void scalar_search(Search& s, const Budget& b) {
    const Node& n = *s.node;
    const Sort& sort = n.charts[0].sort();
    const std::size_t slot = static_cast<std::size_t>(n.slots[0]);
    const bool disk = sort.kind == SortKind::ScalarDisk;
    Complex best_z = disk ? Complex(0.0) : Complex(sort.lo);
    // norm(A + l B): compute A and B once, then each probe is a norm.
    const Node& body = nodes_[static_cast<std::size_t>(n.body)];
    const bool affine = body.kind == FormulaKind::Norm && degree(*body.term, n.slots[0]) <= 1;
    std::vector<Matrix> a0, b1;
    if (affine) {
      for (std::size_t i = 0; i < shape_.num_blocks(); ++i) {
        env_[slot] = Complex(0.0);
        a0.push_back(term_block(*body.term, i));
        env_[slot] = Complex(1.0);
        b1.push_back(term_block(*body.term, i) - a0.back());
      }
    }
    Matrix work;
    auto probe = [&](Complex z) {
      env_[slot] = z;
      double v = 0.0;
      if (affine) {
        for (std::size_t i = 0; i < a0.size(); ++i) {
          work = a0[i] + z * b1[i];
          v = std::max(v, linalg::spectral_norm(work));
        }
      } else {
        v = eval(n.body, s.wlo(s.best), s.whi(s.best));
      }
      const bool improved = s.better(v, s.best);
      offer(s, v);
      if (improved) best_z = z;
      return improved;
    };

    // A norm of an affine function is convex, so a coarse grid suffices to
    // seed the refinement.
    const int g = affine ? std::min(cfg_.scalar_grid, 19) : cfg_.scalar_grid;
    double h;
    if (disk) {
      const int rings = std::max(1, static_cast<int>(std::lround(std::sqrt(g / 3.0))));
      h = 1.0 / rings;
      if (probe(0.0), s.done(s.best)) return;
      for (int m = 1; m <= rings; ++m) {
        for (int t = 0; t < 6 * m; ++t) {
          probe(std::polar(static_cast<double>(m) / rings, 2.0 * std::numbers::pi * t / (6 * m)));
          if (s.done(s.best)) return;
        }
      }
    } else {
      const double width = sort.hi - sort.lo;
      h = g > 1 ? width / (g - 1) : width;
      for (int t = 0; t < g; ++t) {
        probe(Complex(g > 1 ? sort.lo + width * t / (g - 1) : sort.lo, 0.0));
        if (s.done(s.best)) return;
      }
    }
    if (h <= 0.0) return;

    const double r = std::numbers::sqrt2 / 2;
    const std::vector<Complex> dirs =
        disk ? std::vector<Complex>{{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {r, r}, {-r, -r}, {r, -r}, {-r, r}}
             : std::vector<Complex>{{1, 0}, {-1, 0}};
    const int iterations = affine ? 400 : std::max(40, b.steps);
    std::vector<Complex> candidates;
    const double h_min = 1e-9;
    for (int it = 0; it < iterations && h > h_min; ++it) {
      bool moved = false;
      const Complex centre = best_z;
      // Axis and diagonal moves that stay feasible, plus arcs of the circle
      // through the centre, so boundary optima are reachable.
      candidates.clear();
      for (const Complex& d : dirs) {
        const Complex z = centre + h * d;
        if (disk ? std::abs(z) <= 1.0 : (z.real() >= sort.lo && z.real() <= sort.hi)) candidates.push_back(z);
      }
      if (disk && std::abs(centre) > h) {
        const double turn = h / std::abs(centre);
        candidates.push_back(centre * std::polar(1.0, turn));
        candidates.push_back(centre * std::polar(1.0, -turn));
      }
      for (const Complex& z : candidates) {
        if (probe(z)) {
          moved = true;
          break;
        }
        if (s.done(s.best)) return;
      }
      if (s.done(s.best)) return;
      if (!moved) h *= 0.5;
    }
  }
};

BoundKind bound_for(const Formula& f) {
  if (!quantifiers_monotone(f)) return BoundKind::Estimate;
  switch (polarity(f)) {
    case Polarity::PureSup: return BoundKind::LowerBoundOfTrueValue;
    case Polarity::PureInf: return BoundKind::UpperBoundOfTrueValue;
    case Polarity::Alternating: return BoundKind::Estimate;
  }
  return BoundKind::Estimate;
}

}  // namespace

EvalResult evaluate_numeric(const Formula& f, const BlockShape& shape, const EvalConfig& cfg) {
  cfg.validate();
  if (!is_sentence(f)) throw ValidationError("evaluation needs a sentence; free variables present");
  Machine m(f, shape, cfg);
  EvalResult r;
  r.value = m.run();
  r.bound = bound_for(f);
  r.exact = false;
  r.config = cfg;
  const Node& root = m.root();
  const auto& w = m.root_witness();
  if ((root.kind == FormulaKind::Sup || root.kind == FormulaKind::Inf) && w.size() == root.slots.size()) {
    for (std::size_t j = 0; j < w.size(); ++j) {
      Witness wit{root.names[j], root.charts[j].sort(), w[j]};
      if (is_projection_like(wit.sort.kind)) wit.value = snap_to_projection(std::get<Element>(wit.value));
      r.witnesses.push_back(std::move(wit));
    }
  }
  return r;
}

double evaluate_at(const Formula& body, const BlockShape& shape, const std::vector<Witness>& env, const EvalConfig& cfg) {
  cfg.validate();
  std::set<std::string> names;
  for (const auto& w : env) {
    names.insert(w.var);
    if (const Element* e = std::get_if<Element>(&w.value); e && !(e->shape() == shape)) {
      throw ValidationError("witness '" + w.var + "' has shape " + e->shape().to_string());
    }
  }
  for (const auto& v : free_variables(body)) {
    if (!names.contains(v)) throw ValidationError("no value for free variable '" + v + "'");
  }
  Machine m(body, shape, cfg, env);
  return m.run();
}

}  // namespace csw
