// Recursive-descent parser for the sentence DSL.
//
//   formula := ('sup'|'inf') var (',' var)* ':' sort '.' formula | sum
//   sum     := prod ('+' prod)*
//   prod    := atom ('*' atom)*
//   atom    := 'norm(' term ')' | 'abs(' formula '-' formula ')'
//            | 'max(' formula ',' formula ')' | 'min(' formula ',' formula ')'
//            | real | real '*' atom | '(' formula ')'
//   term    := tprod (('+'|'-') tprod)*
//   tprod   := factor ('*' factor)*
//   factor  := complex '*' factor | complex | '-' factor | var | 'I' | '0'
//            | 'adj(' term ')' | '(' term ')'
//
// A complex literal is a real, an imaginary `2i`, or `(a+bi)`. A bare
// literal c in a term means c*I, except that `0` is the zero constant.

#include "csw/formula/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>
#include <vector>

namespace csw::formula {

ParseError::ParseError(const std::string& what, std::size_t position)
    : ValidationError(what + " at offset " + std::to_string(position)), position_(position) {}

namespace {

enum class Tok { Ident, Number, Punct, End };

struct Token {
  Tok kind;
  std::size_t pos;
  std::string text;    // Ident
  char punct = 0;      // Punct
  double value = 0.0;  // Number
  bool imaginary = false;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (ident_start(c)) {
      const std::size_t start = i;
      while (i < s.size() && ident_char(s[i])) ++i;
      out.push_back({Tok::Ident, start, std::string(s.substr(start, i - start))});
      continue;
    }
    if (digit(c)) {
      const std::size_t start = i;
      while (i < s.size() && digit(s[i])) ++i;
      if (i + 1 < s.size() && s[i] == '.' && digit(s[i + 1])) {
        ++i;
        while (i < s.size() && digit(s[i])) ++i;
      }
      if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
        if (j < s.size() && digit(s[j])) {
          i = j;
          while (i < s.size() && digit(s[i])) ++i;
        }
      }
      Token t{Tok::Number, start};
      auto res = std::from_chars(s.data() + start, s.data() + i, t.value);
      if (res.ec != std::errc()) throw ParseError("malformed number", start);
      if (i < s.size() && s[i] == 'i' && !(i + 1 < s.size() && ident_char(s[i + 1]))) {
        t.imaginary = true;
        ++i;
      }
      out.push_back(t);
      continue;
    }
    if (std::string_view("()+-*,.:").find(c) != std::string_view::npos) {
      Token t{Tok::Punct, i};
      t.punct = c;
      out.push_back(t);
      ++i;
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", i);
  }
  out.push_back({Tok::End, s.size()});
  return out;
}

const std::vector<std::string_view> kKeywords = {"sup", "inf", "norm", "abs", "max", "min", "adj", "I", "interval"};

bool is_keyword(const std::string& s) { return std::find(kKeywords.begin(), kKeywords.end(), s) != kKeywords.end(); }

class Parser {
 public:
  Parser(std::string_view text, const std::set<std::string>& free) : toks_(lex(text)) {
    scope_.assign(free.begin(), free.end());
  }

  FormulaPtr parse_sentence() {
    FormulaPtr f = formula();
    if (peek().kind != Tok::End) fail("unexpected trailing input");
    return f;
  }

  Sort parse_sort_only() {
    Sort s = sort();
    if (peek().kind != Tok::End) fail("unexpected trailing input");
    return s;
  }

 private:
  std::vector<Token> toks_;
  std::size_t at_ = 0;
  std::vector<std::string> scope_;

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(at_ + k, toks_.size() - 1)]; }
  const Token& next() { return toks_[std::min(at_++, toks_.size() - 1)]; }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, peek().pos); }

  bool is_punct(char c, std::size_t k = 0) const { return peek(k).kind == Tok::Punct && peek(k).punct == c; }
  bool is_ident(std::string_view name, std::size_t k = 0) const {
    return peek(k).kind == Tok::Ident && peek(k).text == name;
  }

  void expect(char c) {
    if (!is_punct(c)) fail(std::string("expected '") + c + "'");
    ++at_;
  }

  // ---- formulas --------------------------------------------------------

  FormulaPtr formula() {
    if (is_ident("sup") || is_ident("inf")) return quantified();
    return formula_sum();
  }

  FormulaPtr quantified() {
    const bool is_sup = next().text == "sup";
    std::vector<std::string> vars;
    for (;;) {
      if (peek().kind != Tok::Ident) fail("expected a variable name");
      if (is_keyword(peek().text)) fail("'" + peek().text + "' is reserved and cannot name a variable");
      vars.push_back(next().text);
      if (!is_punct(',')) break;
      ++at_;
    }
    expect(':');
    const Sort s = sort();
    expect('.');
    for (const auto& v : vars) scope_.push_back(v);
    FormulaPtr body = formula();
    scope_.resize(scope_.size() - vars.size());
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
      body = is_sup ? sup(*it, s, body) : inf(*it, s, body);
    }
    return body;
  }

  FormulaPtr formula_sum() {
    FormulaPtr f = product_();
    while (is_punct('+')) {
      ++at_;
      f = add(f, product_());
    }
    return f;
  }

  FormulaPtr product_() {
    FormulaPtr f = atom();
    while (is_punct('*')) {
      ++at_;
      f = multiply(f, atom());
    }
    return f;
  }

  FormulaPtr atom() {
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      if (t.imaginary) fail("complex constants are not allowed outside norm(...)");
      const double c = next().value;
      if (is_punct('*')) {
        ++at_;
        return scale(c, atom());
      }
      return constant(c);
    }
    if (is_punct('(')) {
      ++at_;
      FormulaPtr f = formula();
      expect(')');
      return f;
    }
    if (t.kind == Tok::Ident) {
      if (t.text == "norm") {
        ++at_;
        expect('(');
        TermPtr tm = term();
        expect(')');
        return norm(tm);
      }
      if (t.text == "abs") {
        ++at_;
        expect('(');
        FormulaPtr a = formula();
        expect('-');
        FormulaPtr b = formula();
        expect(')');
        return abs_diff(a, b);
      }
      if (t.text == "max" || t.text == "min") {
        const bool is_max = next().text == "max";
        expect('(');
        FormulaPtr a = formula();
        expect(',');
        FormulaPtr b = formula();
        expect(')');
        return is_max ? max_of(a, b) : min_of(a, b);
      }
      if (t.text == "sup" || t.text == "inf") fail("a quantified operand must be parenthesized");
    }
    if (is_punct('-')) fail("negative constants are not allowed outside norm(...)");
    fail("expected a formula");
  }

  // ---- sorts -----------------------------------------------------------

  double signed_real() {
    bool neg = false;
    if (is_punct('-')) {
      neg = true;
      ++at_;
    }
    if (peek().kind != Tok::Number || peek().imaginary) fail("expected a real number");
    const double v = next().value;
    return neg ? -v : v;
  }

  Sort sort() {
    if (peek().kind != Tok::Ident) fail("expected a sort name");
    const std::size_t pos = peek().pos;
    const std::string name = next().text;
    if (name == "ball") return Sort::of(SortKind::Ball);
    if (name == "sa_ball") return Sort::of(SortKind::SelfAdjointBall);
    if (name == "pos_ball") return Sort::of(SortKind::PositiveBall);
    if (name == "proj") return Sort::of(SortKind::Projection);
    if (name == "proj_nz") return Sort::of(SortKind::NonzeroProjection);
    if (name == "proj_nt") return Sort::of(SortKind::NontrivialProjection);
    if (name == "proj_central") return Sort::of(SortKind::CentralProjection);
    if (name == "unitary") return Sort::of(SortKind::Unitary);
    if (name == "pisom") return Sort::of(SortKind::PartialIsometry);
    if (name == "disk") return Sort::of(SortKind::ScalarDisk);
    if (name == "interval") {
      expect('(');
      const double lo = signed_real();
      expect(',');
      const double hi = signed_real();
      expect(')');
      if (!(lo <= hi)) throw ParseError("interval(lo,hi) needs lo ≤ hi", pos);
      return Sort::interval(lo, hi);
    }
    throw ParseError("unknown sort '" + name + "'", pos);
  }

  // ---- terms -----------------------------------------------------------

  TermPtr term() {
    TermPtr t = term_product();
    for (;;) {
      if (is_punct('+')) {
        ++at_;
        t = formula::sum(t, term_product());
      } else if (is_punct('-')) {
        ++at_;
        t = difference(t, term_product());
      } else {
        return t;
      }
    }
  }

  TermPtr term_product() {
    TermPtr t = factor();
    while (is_punct('*')) {
      ++at_;
      t = product(t, factor());
    }
    return t;
  }

  // Consumes a complex literal if one starts here.
  std::optional<std::pair<Complex, bool>> literal() {
    auto num = [&](std::size_t k) -> const Token* {
      const Token& t = peek(k);
      return t.kind == Tok::Number ? &t : nullptr;
    };
    std::size_t k = 0;
    bool neg = false;
    if (is_punct('-') && num(1)) {
      neg = true;
      k = 1;
    }
    if (const Token* t = num(k)) {
      at_ += k + 1;
      const double v = neg ? -t->value : t->value;
      const bool is_zero_text = !neg && !t->imaginary && t->value == 0.0;
      return std::make_pair(t->imaginary ? Complex(0.0, v) : Complex(v, 0.0), is_zero_text);
    }
    // (a+bi) or (a-bi)
    if (is_punct('(')) {
      std::size_t j = 1;
      bool re_neg = false;
      if (is_punct('-', j)) {
        re_neg = true;
        ++j;
      }
      const Token* re = num(j);
      if (re && !re->imaginary && (is_punct('+', j + 1) || is_punct('-', j + 1))) {
        const bool im_neg = is_punct('-', j + 1);
        const Token* im = num(j + 2);
        if (im && im->imaginary && is_punct(')', j + 3)) {
          at_ += j + 4;
          return std::make_pair(Complex(re_neg ? -re->value : re->value, im_neg ? -im->value : im->value), false);
        }
      }
    }
    return std::nullopt;
  }

  TermPtr factor() {
    if (auto lit = literal()) {
      if (is_punct('*')) {
        ++at_;
        return scale(lit->first, factor());
      }
      if (lit->second) return zero();
      return scale(lit->first, identity());
    }
    if (is_punct('-')) {
      ++at_;
      return scale(-1.0, factor());
    }
    if (is_punct('(')) {
      ++at_;
      TermPtr t = term();
      expect(')');
      return t;
    }
    if (peek().kind == Tok::Ident) {
      const Token& t = peek();
      if (t.text == "I") {
        ++at_;
        return identity();
      }
      if (t.text == "adj") {
        ++at_;
        expect('(');
        TermPtr inner = term();
        expect(')');
        return adjoint(inner);
      }
      if (is_keyword(t.text)) fail("'" + t.text + "' cannot appear inside a term");
      if (std::find(scope_.begin(), scope_.end(), t.text) == scope_.end()) {
        fail("unbound variable '" + t.text + "'");
      }
      return variable(next().text);
    }
    fail("expected a term");
  }
};

}  // namespace

FormulaPtr parse(std::string_view text) { return Parser(text, {}).parse_sentence(); }

FormulaPtr parse_open(std::string_view text, const std::set<std::string>& free) {
  return Parser(text, free).parse_sentence();
}

Sort parse_sort(std::string_view text) { return Parser(text, {}).parse_sort_only(); }

}  // namespace csw::formula
