#include "csw/cli/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <random>
#include <sstream>

#include "csw/algebra/io.hpp"
#include "csw/evaluator/evaluate.hpp"
#include "csw/formula/corpus.hpp"
#include "csw/formula/parser.hpp"
#include "csw/limits/limits.hpp"
#include "csw/structure/archbold.hpp"
#include "csw/structure/decomposition.hpp"
#include "csw/structure/dixmier.hpp"
#include "csw/structure/k0.hpp"
#include "csw/structure/trace.hpp"

namespace csw::cli {

namespace {

constexpr double kCrossValidationTolerance = 5e-2;

// Shortest decimal that parses back to the same double.
std::string num(double v) { return nlohmann::json(v).dump(); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Two-column or wider table, columns padded to their widest cell.
void print_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    width.resize(std::max(width.size(), r.size()));
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  }
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t c = 0; c < r.size(); ++c) {
      line += r[c];
      if (c + 1 < r.size()) line += std::string(width[c] - r[c].size() + 2, ' ');
    }
    out << line << '\n';
  }
}

std::string ranks_string(const std::vector<int>& r) {
  std::string s = "(";
  for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + std::to_string(r[i]);
  return s + ")";
}

std::vector<int> element_ranks(const Element& p) {
  std::vector<int> r;
  for (const auto& b : p.blocks()) r.push_back(static_cast<int>(std::lround(b.trace().real())));
  return r;
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
  std::string s;
  for (char c : text) {
    if (c != '(' && c != ')' && c != '[' && c != ']' && c != ' ') s.push_back(c);
  }
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long v = std::stol(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(static_cast<int>(v));
    } catch (const std::logic_error&) {
      throw ValidationError(std::string("malformed ") + what + " '" + text + "'");
    }
  }
  if (out.empty()) throw ValidationError(std::string("empty ") + what);
  return out;
}

struct Budget {
  std::optional<std::uint64_t> seed;
  std::optional<int> restarts, inner_restarts, steps, scalar_grid;
  std::optional<double> step_scale, decay;

  void add(CLI::App* app) {
    app->add_option("--seed", seed, "Random seed (default: CSL_SEED, else 1)");
    app->add_option("--restarts", restarts, "Starts for the outermost quantifier block");
    app->add_option("--inner-restarts", inner_restarts, "Starts for nested quantifier blocks");
    app->add_option("--steps", steps, "Local-search iterations at the outermost level");
    app->add_option("--step-scale", step_scale, "Initial local-search step");
    app->add_option("--scalar-grid", scalar_grid, "Grid points for lone scalar quantifiers");
    app->add_option("--decay", decay, "Budget decay per nesting level");
  }

  EvalConfig config() const {
    EvalConfig c;
    c.seed = seed ? *seed : seed_from_environment(1);
    if (restarts) c.restarts = *restarts;
    if (inner_restarts) c.inner_restarts = *inner_restarts;
    if (steps) c.local_steps = *steps;
    if (step_scale) c.step_scale = *step_scale;
    if (scalar_grid) c.scalar_grid = *scalar_grid;
    if (decay) c.nest_budget_decay = *decay;
    c.validate();
    return c;
  }
};

struct FormulaSource {
  std::string file, name;

  void add(CLI::App* app) {
    auto* f = app->add_option("-f,--file", file, "Formula file (DSL text)");
    auto* n = app->add_option("--name", name, "Corpus sentence name");
    f->excludes(n);
  }

  bool given() const { return !file.empty() || !name.empty(); }

  std::pair<std::string, formula::FormulaPtr> load() const {
    if (!given()) throw ValidationError("give a formula with -f FILE or --name NAME");
    if (!name.empty()) return {name, formula::corpus_formula(name)};
    return {file, formula::parse(read_file(file))};
  }
};

Element read_element(const std::string& path, const BlockShape& shape) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("'" + path + "' is not valid JSON");
  }
  Element e = element_from_json(j);
  if (!(e.shape() == shape)) {
    throw ValidationError("input element has shape " + e.shape().to_string() + ", expected " + shape.to_string());
  }
  return e;
}

void print_eval(std::ostream& out, const EvalResult& r, const std::string& label, const BlockShape& shape) {
  std::vector<std::vector<std::string>> rows{{"formula", label},
                                             {"algebra", shape.to_string()},
                                             {"value", num(r.value)},
                                             {"bound", to_string(r.bound)},
                                             {"exact", r.exact ? "true" : "false"},
                                             {"seed", std::to_string(r.config.seed)}};
  for (const auto& w : r.witnesses) {
    std::string v;
    if (const auto* z = std::get_if<Complex>(&w.value)) {
      v = num(z->real()) + (z->imag() < 0 ? "-" : "+") + num(std::abs(z->imag())) + "i";
    } else {
      v = "norm " + num(op_norm(std::get<Element>(w.value)));
    }
    rows.push_back({"witness " + w.var, w.sort.to_string() + "  " + v});
  }
  print_table(out, rows);
}

int cmd_eval(const FormulaSource& src, const std::string& algebra, bool exact, bool numeric, const Budget& budget,
             bool json, std::ostream& out) {
  const BlockShape shape = BlockShape::parse(algebra);
  const auto [label, f] = src.load();
  const EvalConfig cfg = budget.config();
  EvalResult r;
  if (exact) {
    auto e = evaluate_exact(*f, shape);
    if (!e) throw ValidationError("no registry template matches '" + label + "'");
    r = *e;
    r.config = cfg;
  } else if (numeric) {
    r = evaluate_numeric(*f, shape, cfg);
  } else {
    r = evaluate(*f, shape, cfg);
  }
  if (json) {
    out << result_to_json(r, label, shape).dump(2) << '\n';
  } else {
    print_eval(out, r, label, shape);
  }
  return 0;
}

int cmd_corpus_run(const std::string& algebra, bool skip_numeric, const Budget& budget, bool json, std::ostream& out) {
  const BlockShape shape = BlockShape::parse(algebra);
  const EvalConfig cfg = budget.config();
  std::vector<std::vector<std::string>> rows{{"name", "exact", "numeric", "bound", "status", "seconds"}};
  nlohmann::json entries = nlohmann::json::array();
  bool all_pass = true;
  for (const auto& e : formula::corpus()) {
    const auto exact = evaluate_exact(*e.formula, shape);
    std::optional<EvalResult> numeric;
    const auto t0 = std::chrono::steady_clock::now();
    if (!skip_numeric) numeric = evaluate_numeric(*e.formula, shape, cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string status = "n/a";
    if (exact && numeric) {
      const double diff = numeric->value - exact->value;
      bool pass = std::abs(diff) <= kCrossValidationTolerance;
      // A lower bound must not overshoot; an upper bound must not undershoot.
      if (numeric->bound == BoundKind::LowerBoundOfTrueValue) pass = pass && diff <= cfg.tolerance.eps_class;
      if (numeric->bound == BoundKind::UpperBoundOfTrueValue) pass = pass && diff >= -cfg.tolerance.eps_class;
      status = pass ? "pass" : "FAIL";
      all_pass = all_pass && pass;
    } else if (exact) {
      status = "exact-only";
    } else if (numeric) {
      status = "numeric-only";
    }
    rows.push_back({e.name, exact ? num(exact->value) : "-", numeric ? num(numeric->value) : "-",
                    numeric ? to_string(numeric->bound) : "-", status, numeric ? num(std::round(secs * 100) / 100) : "-"});
    nlohmann::json j{{"name", e.name}, {"status", status}};
    j["exact"] = exact ? nlohmann::json(exact->value) : nlohmann::json(nullptr);
    j["numeric"] = numeric ? nlohmann::json(numeric->value) : nlohmann::json(nullptr);
    j["bound"] = numeric ? nlohmann::json(to_string(numeric->bound)) : nlohmann::json(nullptr);
    j["seconds"] = secs;
    entries.push_back(std::move(j));
  }
  if (json) {
    out << nlohmann::json{{"algebra", shape.to_string()}, {"config", config_to_json(cfg)}, {"entries", entries},
                          {"all_pass", all_pass}}
               .dump(2)
        << '\n';
  } else {
    print_table(out, rows);
  }
  return 0;
}

int cmd_corpus_list(std::ostream& out) {
  std::vector<std::vector<std::string>> rows{{"name", "origin"}};
  for (const auto& e : formula::corpus()) rows.push_back({e.name, e.origin});
  print_table(out, rows);
  return 0;
}

int cmd_search(const FormulaSource& src, double eps, int max_dim, const Budget& budget, bool json,
               std::ostream& out) {
  const auto [label, f] = src.load();
  const auto r = finite_model_search(*f, eps, max_dim, budget.config());
  if (json) {
    auto j = search_result_to_json(r);
    j["formula"] = label;
    out << j.dump(2) << '\n';
  } else {
    print_table(out, {{"formula", label},
                      {"found", r.found ? "true" : "false"},
                      {"algebra", r.shape ? r.shape->to_string() : "-"},
                      {"value", num(r.value)},
                      {"visited", std::to_string(r.visited)}});
  }
  return 0;
}

int cmd_decompose(const std::string& algebra, int d, bool json, std::ostream& out) {
  const BlockShape shape = BlockShape::parse(algebra);
  const auto r = decompose_identity(shape, d);
  std::string why;
  if (!check_decomposition(r, shape, &why)) throw std::logic_error("decomposition check failed: " + why);
  if (json) {
    out << decomposition_to_json(r, shape).dump(2) << '\n';
    return 0;
  }
  std::vector<std::vector<std::string>> rows{{"kind", "index", "ranks"}};
  for (std::size_t j = 0; j < r.parts.size(); ++j) rows.push_back({"part", std::to_string(j), ranks_string(element_ranks(r.parts[j]))});
  for (std::size_t j = 0; j < r.remainder_abelians.size(); ++j) {
    rows.push_back({"abelian", std::to_string(j), ranks_string(element_ranks(r.remainder_abelians[j]))});
  }
  out << "algebra " << shape.to_string() << ", d = " << d << '\n';
  print_table(out, rows);
  return 0;
}

int cmd_dixmier(const std::string& algebra, const std::string& mode_text, const std::string& input,
                const Budget& budget, bool json, std::ostream& out) {
  const BlockShape shape = BlockShape::parse(algebra);
  DixmierMode mode;
  if (mode_text == "exact") {
    mode = DixmierMode::Exact;
  } else if (mode_text == "iter" || mode_text == "iterative") {
    mode = DixmierMode::Iterative;
  } else {
    throw ValidationError("--mode must be exact or iter, got '" + mode_text + "'");
  }
  Element x = Element::zero(shape);
  if (!input.empty()) {
    x = read_element(input, shape);
  } else {
    std::mt19937_64 rng(budget.config().seed);
    x = std::get<Element>(sample_sort(formula::Sort::of(formula::SortKind::SelfAdjointBall), shape, rng));
  }
  const auto r = dixmier_average(x, mode);
  const double residual = distance(replay_dixmier(x, r, mode), r.center);
  if (json) {
    auto j = dixmier_to_json(r);
    j["algebra"] = shape.to_string();
    j["mode"] = mode == DixmierMode::Exact ? "exact" : "iterative";
    j["input"] = element_to_json(x);
    j["replay_residual"] = residual;
    out << j.dump(2) << '\n';
    return 0;
  }
  std::vector<std::vector<std::string>> rows{{"algebra", shape.to_string()},
                                             {"mode", mode == DixmierMode::Exact ? "exact" : "iterative"},
                                             {"terms", std::to_string(r.transcript.size() + r.imaginary_transcript.size())},
                                             {"replay residual", num(residual)}};
  for (std::size_t i = 0; i < shape.num_blocks(); ++i) {
    const Complex z = r.center.block(i)(0, 0);
    rows.push_back({"center block " + std::to_string(i), num(z.real()) + (z.imag() < 0 ? "-" : "+") +
                                                            num(std::abs(z.imag())) + "i"});
  }
  if (!r.errors.empty()) {
    double worst = 0.0;
    for (std::size_t k = 0; k + 1 < r.errors.size(); ++k) {
      if (r.errors[k] > 0) worst = std::max(worst, r.errors[k + 1] / r.errors[k]);
    }
    rows.push_back({"steps", std::to_string(r.errors.size() - 1)});
    rows.push_back({"final error", num(r.errors.back())});
    rows.push_back({"worst step ratio", num(worst)});
  }
  print_table(out, rows);
  return 0;
}

int cmd_k0(const std::string& algebra, bool json, std::ostream& out) {
  const BlockShape shape = BlockShape::parse(algebra);
  const auto k = k0_data(shape);
  if (json) {
    auto j = k0_to_json(k);
    j["algebra"] = shape.to_string();
    out << j.dump(2) << '\n';
    return 0;
  }
  std::string tf;
  for (std::size_t i = 0; i < k.trace_functional.size(); ++i) tf += (i ? ", " : "") + num(k.trace_functional[i]);
  print_table(out, {{"algebra", shape.to_string()},
                    {"K0", "Z^" + std::to_string(k.group_rank) + ", componentwise cone"},
                    {"order unit", ranks_string(k.order_unit)},
                    {"trace functional", "(" + tf + ")"},
                    {"totally ordered", k.totally_ordered ? "true" : "false"},
                    {"successors adjacent", k.successors_adjacent ? "true" : "false"},
                    {"K1 trivial", k.k1_trivial ? "true" : "false"}});
  return 0;
}

int cmd_trace_est(const std::string& algebra, const std::string& ranks_text, int depth, bool json, std::ostream& out) {
  const BlockShape shape = BlockShape::parse(algebra);
  const RankTuple ranks{parse_int_list(ranks_text, "rank tuple")};
  if (ranks.ranks.size() != shape.num_blocks()) {
    throw ValidationError("rank tuple has " + std::to_string(ranks.ranks.size()) + " entries for " +
                          std::to_string(shape.num_blocks()) + " blocks");
  }
  for (std::size_t i = 0; i < shape.num_blocks(); ++i) {
    if (ranks.ranks[i] < 0 || ranks.ranks[i] > shape.block(i)) throw ValidationError("rank out of range in block " + std::to_string(i));
  }
  const Element p = Element::diagonal_projection(shape, ranks);
  MvnOracle oracle;
  const Rational est = trace_from_comparisons(p, depth, shape, oracle);
  const double tr = normalized_trace(p).real();
  if (json) {
    out << nlohmann::json{{"algebra", shape.to_string()},
                          {"rank_tuple", ranks.ranks},
                          {"depth", depth},
                          {"estimate", {est.num, est.den}},
                          {"estimate_value", est.value()},
                          {"trace", tr},
                          {"error", std::abs(est.value() - tr)},
                          {"oracle_calls", oracle.calls()}}
               .dump(2)
        << '\n';
  } else {
    print_table(out, {{"algebra", shape.to_string()},
                      {"rank tuple", ranks_string(ranks.ranks)},
                      {"depth", std::to_string(depth)},
                      {"estimate", std::to_string(est.num) + "/" + std::to_string(est.den) + " = " + num(est.value())},
                      {"trace", num(tr)},
                      {"error", num(std::abs(est.value() - tr))},
                      {"oracle calls", std::to_string(oracle.calls())}});
  }
  return 0;
}

struct LimitArgs {
  FormulaSource src;
  std::string sequence;
  int modulus = 1;
  std::optional<std::int64_t> mod_d;
  std::string subsequence;
  bool k0_demo = false;
  double s = 0.5, lambda = 0.5;
  std::string ns = "100,10000,1000000";
};

int cmd_limit(const LimitArgs& a, const Budget& budget, bool json, std::ostream& out) {
  if (a.k0_demo) {
    if (a.src.given() || !a.sequence.empty() || a.mod_d) throw ValidationError("--k0-demo takes only --s, --lambda and --n");
    std::vector<std::int64_t> ns;
    for (int n : parse_int_list(a.ns, "n list")) ns.push_back(n);
    const auto rows = k0_demo_sequences(a.s, a.lambda, ns);
    if (json) {
      out << nlohmann::json{{"s", a.s}, {"lambda", a.lambda}, {"rows", k0_demo_to_json(rows)}}.dump(2) << '\n';
      return 0;
    }
    std::vector<std::vector<std::string>> t{{"n", "floor(n^s)", "trace", "floor(n*lambda)", "trace", "regime"}};
    for (const auto& r : rows) {
      t.push_back({std::to_string(r.n), std::to_string(r.rank_s), num(r.trace_s), std::to_string(r.rank_lambda),
                   num(r.trace_lambda), r.constructed ? "element" : "rank arithmetic"});
    }
    print_table(out, t);
    return 0;
  }
  if (a.sequence.empty()) throw ValidationError("--sequence RULE is required");
  if (a.mod_d) {
    if (a.src.given()) throw ValidationError("--mod-d does not take a formula");
    std::optional<Subsequence> sub;
    if (!a.subsequence.empty()) {
      const auto v = parse_int_list(a.subsequence, "subsequence (modulus,residue)");
      if (v.size() != 2) throw ValidationError("--subsequence takes modulus,residue");
      sub = Subsequence{v[0], v[1]};
    }
    const auto m = mod_d_invariant(IntegerRule::parse(a.sequence), *a.mod_d, sub);
    if (json) {
      out << mod_invariant_to_json(m).dump(2) << '\n';
      return 0;
    }
    std::string hist;
    for (const auto& [k, v] : m.histogram) hist += (hist.empty() ? "" : ", ") + std::to_string(k) + ": " + std::to_string(v);
    print_table(out, {{"rule", a.sequence},
                      {"d", std::to_string(*a.mod_d)},
                      {"invariant", m.value ? std::to_string(*m.value) : "divergent"},
                      {"histogram", "{" + hist + "}"}});
    return 0;
  }
  const AlgebraSequence seq = AlgebraSequence::parse(a.sequence);
  const auto [label, f] = a.src.load();
  const auto r = eval_along(*f, seq, budget.config(), a.modulus);
  if (json) {
    auto j = limit_report_to_json(r);
    j["formula"] = label;
    j["sequence"] = seq.description;
    out << j.dump(2) << '\n';
    return 0;
  }
  std::vector<std::vector<std::string>> t{{"i", "algebra", "value", "exact"}};
  for (std::size_t j = 0; j < r.values.size(); ++j) {
    t.push_back({std::to_string(j + 1), r.shapes[j], num(r.values[j]), r.exact[j] ? "true" : "false"});
  }
  print_table(out, t);
  out << "limsup " << num(r.limsup) << "  liminf " << num(r.liminf) << '\n';
  for (const auto& s : r.subsequence_limits) {
    out << "i = " << s.residue << " mod " << s.modulus << ": limsup " << num(s.limsup) << "  liminf " << num(s.liminf)
        << '\n';
  }
  return 0;
}

int cmd_archbold(const std::string& algebra, const std::string& input, const Budget& budget, bool json,
                 std::ostream& out) {
  const BlockShape shape = BlockShape::parse(algebra);
  const EvalConfig cfg = budget.config();
  Element a = Element::zero(shape);
  if (!input.empty()) {
    a = read_element(input, shape);
  } else {
    std::mt19937_64 rng(cfg.seed);
    a = std::get<Element>(sample_sort(formula::Sort::of(formula::SortKind::Ball), shape, rng));
  }
  const auto k = archbold_constants(a, cfg);
  const double gap = std::abs(k.derivation_norm - 2.0 * k.dist_to_center);
  if (json) {
    out << nlohmann::json{{"algebra", shape.to_string()},
                          {"input", element_to_json(a)},
                          {"dist_to_center", k.dist_to_center},
                          {"derivation_norm", k.derivation_norm},
                          {"identity_gap", gap},
                          {"nearest_central", element_to_json(k.nearest_central)},
                          {"config", config_to_json(cfg)}}
               .dump(2)
        << '\n';
  } else {
    print_table(out, {{"algebra", shape.to_string()},
                      {"dist to center", num(k.dist_to_center)},
                      {"derivation norm", num(k.derivation_norm)},
                      {"|norm - 2 dist|", num(gap)}});
  }
  return 0;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-dimensional C*-algebra workbench: continuous-logic sentences and structure", "csw"};
  app.require_subcommand(1);
  bool json = false;

  FormulaSource eval_src;
  std::string eval_algebra;
  bool eval_exact = false, eval_numeric = false;
  Budget eval_budget;
  auto* eval = app.add_subcommand("eval", "Evaluate a sentence on an algebra");
  eval_src.add(eval);
  eval->add_option("-a,--algebra", eval_algebra, "Shape, e.g. M2+M3 or C^2");
  auto* ex = eval->add_flag("--exact", eval_exact, "Registry value only");
  auto* nu = eval->add_flag("--numeric", eval_numeric, "Numeric search only");
  ex->excludes(nu);
  eval_budget.add(eval);
  eval->add_flag("--json", json, "JSON output");

  auto* corpus = app.add_subcommand("corpus", "Corpus regression");
  corpus->require_subcommand(1);
  std::string corpus_algebra;
  bool skip_numeric = false;
  Budget corpus_budget;
  auto* corpus_run = corpus->add_subcommand("run", "Evaluate every corpus sentence against the registry");
  corpus_run->add_option("-a,--algebra", corpus_algebra, "Shape")->required();
  corpus_run->add_flag("--skip-numeric", skip_numeric, "Report registry values only");
  corpus_budget.add(corpus_run);
  corpus_run->add_flag("--json", json, "JSON output");
  auto* corpus_list = corpus->add_subcommand("list", "List corpus sentences");

  FormulaSource search_src;
  double eps = 0.0;
  int max_dim = 0;
  Budget search_budget;
  auto* search = app.add_subcommand("search", "Search for a finite model with |value| < eps");
  search_src.add(search);
  search->add_option("--eps", eps, "Threshold")->required();
  search->add_option("--max-dim", max_dim, "Largest total block size")->required();
  search_budget.add(search);
  search->add_flag("--json", json, "JSON output");

  std::string dec_algebra;
  int dec_d = 0;
  auto* decompose = app.add_subcommand("decompose", "Split the identity into d equivalent parts");
  decompose->add_option("-a,--algebra", dec_algebra, "Shape")->required();
  decompose->add_option("-d", dec_d, "Number of parts")->required();
  decompose->add_flag("--json", json, "JSON output");

  std::string dix_algebra, dix_mode, dix_input;
  Budget dix_budget;
  auto* dixmier = app.add_subcommand("dixmier", "Dixmier averaging to the centre");
  dixmier->add_option("-a,--algebra", dix_algebra, "Shape")->required();
  dixmier->add_option("--mode", dix_mode, "exact or iter")->required();
  dixmier->add_option("--input", dix_input, "Element JSON file (default: random self-adjoint contraction)");
  dixmier->add_option("--seed", dix_budget.seed, "Seed for the random input");
  dixmier->add_flag("--json", json, "JSON output");

  std::string k0_algebra;
  auto* k0 = app.add_subcommand("k0", "K-theory data of an algebra");
  k0->add_option("-a,--algebra", k0_algebra, "Shape")->required();
  k0->add_flag("--json", json, "JSON output");

  std::string te_algebra, te_ranks;
  int te_depth = 0;
  auto* trace_est = app.add_subcommand("trace-est", "Recover a projection's trace from comparisons");
  trace_est->add_option("-a,--algebra", te_algebra, "Shape")->required();
  trace_est->add_option("--rank-tuple", te_ranks, "Ranks per block, e.g. 2,1")->required();
  trace_est->add_option("--depth", te_depth, "Depth d")->required();
  trace_est->add_flag("--json", json, "JSON output");

  LimitArgs lim;
  Budget lim_budget;
  auto* limit = app.add_subcommand("limit", "Sentences along sequences of algebras, mod-d invariants, K0 demo");
  lim.src.add(limit);
  limit->add_option("--sequence", lim.sequence, "Rule: n=a..b, n=EXPR[,i=a..b], const=SHAPE, R1|R2");
  limit->add_option("--modulus", lim.modulus, "Report limits along residue classes of i");
  limit->add_option("--mod-d", lim.mod_d, "Compute the eventual value of n_i mod d");
  limit->add_option("--subsequence", lim.subsequence, "modulus,residue restriction for --mod-d");
  limit->add_flag("--k0-demo", lim.k0_demo, "Trace table of rank floor(n^s) and floor(n lambda) projections");
  limit->add_option("--s", lim.s, "Exponent s in [0,1]");
  limit->add_option("--lambda", lim.lambda, "Ratio lambda in [0,1]");
  limit->add_option("--n", lim.ns, "Comma-separated sizes");
  lim_budget.add(limit);
  limit->add_flag("--json", json, "JSON output");

  std::string ar_algebra, ar_input;
  Budget ar_budget;
  auto* archbold = app.add_subcommand("archbold", "Distance to the centre against the inner derivation norm");
  archbold->add_option("-a,--algebra", ar_algebra, "Shape")->required();
  archbold->add_option("--input", ar_input, "Element JSON file (default: random contraction)");
  ar_budget.add(archbold);
  archbold->add_flag("--json", json, "JSON output");

  std::vector<std::string> argv_store{"csw"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    const CLI::App* target = &app;
    for (const auto* sub : app.get_subcommands()) {
      target = sub;
      for (const auto* s2 : sub->get_subcommands()) target = s2;
    }
    out << target->help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "csw: error: " << first_line(e.what()) << '\n';
    return 1;
  }

  try {
    if (*eval) {
      // The shape is validated before the formula source so that a bad shape
      // is reported first.
      if (eval_algebra.empty()) throw ValidationError("--algebra SHAPE is required");
      BlockShape::parse(eval_algebra);
      return cmd_eval(eval_src, eval_algebra, eval_exact, eval_numeric, eval_budget, json, out);
    }
    if (*corpus_run) return cmd_corpus_run(corpus_algebra, skip_numeric, corpus_budget, json, out);
    if (*corpus_list) return cmd_corpus_list(out);
    if (*search) return cmd_search(search_src, eps, max_dim, search_budget, json, out);
    if (*decompose) return cmd_decompose(dec_algebra, dec_d, json, out);
    if (*dixmier) return cmd_dixmier(dix_algebra, dix_mode, dix_input, dix_budget, json, out);
    if (*k0) return cmd_k0(k0_algebra, json, out);
    if (*trace_est) return cmd_trace_est(te_algebra, te_ranks, te_depth, json, out);
    if (*limit) return cmd_limit(lim, lim_budget, json, out);
    if (*archbold) return cmd_archbold(ar_algebra, ar_input, ar_budget, json, out);
  } catch (const formula::ParseError& e) {
    err << "csw: error: " << first_line(e.what()) << " (at byte " << e.position() << ")\n";
    return 1;
  } catch (const ValidationError& e) {
    err << "csw: error: " << first_line(e.what()) << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "csw: internal error: " << first_line(e.what()) << '\n';
    return 2;
  }
  err << "csw: internal error: no command dispatched\n";
  return 2;
}

}  // namespace csw::cli
