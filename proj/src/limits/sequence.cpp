#include "csw/limits/sequence.hpp"

#include <cctype>
#include <charconv>
#include <limits>
#include <vector>

namespace csw {

namespace {

constexpr int kDefaultLast = 20;

std::string trim(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  }
  return out;
}

std::int64_t parse_int(std::string_view s, std::string_view ctx) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
    throw ValidationError("expected an integer in '" + std::string(ctx) + "', got '" + std::string(s) + "'");
  }
  return v;
}

// "a..b"
std::pair<std::int64_t, std::int64_t> parse_range(std::string_view s, std::string_view ctx) {
  const auto dots = s.find("..");
  if (dots == std::string_view::npos) throw ValidationError("expected a range a..b in '" + std::string(ctx) + "'");
  const auto a = parse_int(s.substr(0, dots), ctx), b = parse_int(s.substr(dots + 2), ctx);
  if (b < a) throw ValidationError("empty range in '" + std::string(ctx) + "'");
  return {a, b};
}

// Splits off an optional ",i=a..b" suffix.
std::pair<std::string, std::pair<int, int>> split_index_range(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) return {s, {1, kDefaultLast}};
  const std::string tail = s.substr(comma + 1);
  if (tail.rfind("i=", 0) != 0) throw ValidationError("expected ',i=a..b' in '" + s + "'");
  const auto [a, b] = parse_range(tail.substr(2), s);
  if (a < 1) throw ValidationError("indices start at 1 in '" + s + "'");
  return {s.substr(0, comma), {static_cast<int>(a), static_cast<int>(b)}};
}

// Affine expression in i: signed terms, each an integer, i, or c*i / ci.
std::pair<std::int64_t, std::int64_t> parse_affine(const std::string& e) {
  if (e.empty()) throw ValidationError("empty expression");
  std::int64_t slope = 0, offset = 0;
  std::size_t pos = 0;
  while (pos < e.size()) {
    int sign = 1;
    if (e[pos] == '+' || e[pos] == '-') {
      sign = e[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (pos != 0) {
      throw ValidationError("unexpected '" + std::string(1, e[pos]) + "' in '" + e + "'");
    }
    std::size_t end = pos;
    while (end < e.size() && e[end] != '+' && e[end] != '-') ++end;
    std::string term = e.substr(pos, end - pos);
    if (term.empty()) throw ValidationError("missing term in '" + e + "'");
    if (term.back() == 'i') {
      term.pop_back();
      if (!term.empty() && term.back() == '*') term.pop_back();
      slope += sign * (term.empty() ? 1 : parse_int(term, e));
    } else {
      offset += sign * parse_int(term, e);
    }
    pos = end;
  }
  return {slope, offset};
}

std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> out(1);
  for (char c : s) {
    if (c == sep) {
      out.emplace_back();
    } else {
      out.back().push_back(c);
    }
  }
  return out;
}

}  // namespace

IntegerRule::IntegerRule(std::int64_t slope, std::int64_t offset, int first, int last)
    : slope_(slope), offset_(offset), first_(first), last_(last) {
  if (first < 1 || last < first) throw ValidationError("index range must satisfy 1 <= first <= last");
}

IntegerRule IntegerRule::parse(std::string_view text) {
  const std::string s = trim(text);
  if (s.rfind("n=", 0) != 0) throw ValidationError("integer rule must start with 'n=': '" + s + "'");
  const std::string body = s.substr(2);
  if (body.find("..") != std::string::npos && body.find(',') == std::string::npos) {
    const auto [a, b] = parse_range(body, s);
    return IntegerRule(1, a - 1, 1, static_cast<int>(b - a + 1));
  }
  const auto [expr, range] = split_index_range(body);
  const auto [slope, offset] = parse_affine(expr);
  return IntegerRule(slope, offset, range.first, range.second);
}

std::string IntegerRule::to_string() const {
  std::string e = std::to_string(slope_) + "*i";
  if (offset_ != 0) e += (offset_ > 0 ? "+" : "") + std::to_string(offset_);
  return "n=" + e + ",i=" + std::to_string(first_) + ".." + std::to_string(last_);
}

AlgebraSequence AlgebraSequence::matrices(const IntegerRule& n) {
  for (int i = n.first(); i <= n.last(); ++i) {
    if (n.at(i) < 1) throw ValidationError("block size must be >= 1 (n_" + std::to_string(i) + " = " + std::to_string(n.at(i)) + ")");
  }
  return {[n](int i) { return BlockShape({static_cast<int>(n.at(n.first() + i - 1))}); }, n.last() - n.first() + 1,
          "M_{" + n.to_string() + "}"};
}

AlgebraSequence AlgebraSequence::constant(const BlockShape& shape, int size) {
  if (size < 1) throw ValidationError("sequence length must be >= 1");
  return {[shape](int) { return shape; }, size, "const=" + shape.to_string()};
}

AlgebraSequence AlgebraSequence::parse(std::string_view rule) {
  const std::string s = trim(rule);
  const auto parts = split_top(s, '|');
  if (parts.size() > 1) {
    std::vector<AlgebraSequence> seqs;
    int len = std::numeric_limits<int>::max();
    std::string desc;
    for (const auto& p : parts) {
      seqs.push_back(parse(p));
      len = std::min(len, seqs.back().size);
      desc += (desc.empty() ? "" : "|") + seqs.back().description;
    }
    const int k = static_cast<int>(seqs.size());
    return {[seqs, k](int i) { return seqs[(i - 1) % k].at((i - 1) / k + 1); }, len * k, desc};
  }
  if (s.rfind("const=", 0) == 0) {
    const auto [shape, range] = split_index_range(s.substr(6));
    return constant(BlockShape::parse(shape), range.second - range.first + 1);
  }
  return matrices(IntegerRule::parse(s));
}

BlockShape AlgebraSequence::at(int i) const {
  if (i < 1 || i > size) throw ValidationError("index " + std::to_string(i) + " outside 1.." + std::to_string(size));
  return generator(i);
}

}  // namespace csw
