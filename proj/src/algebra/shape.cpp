#include "csw/algebra/shape.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <numeric>

namespace csw {

namespace {

constexpr int kMaxBlockSize = 4096;

// Reads a decimal integer at `pos`, advancing it. Rejects empty input and overflow.
int read_int(std::string_view text, std::size_t& pos, std::string_view context) {
  std::size_t start = pos;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
  if (start == pos) {
    throw ValidationError("malformed shape '" + std::string(text) + "': expected an integer after " +
                          std::string(context));
  }
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data() + start, text.data() + pos, value);
  if (ec != std::errc() || value > kMaxBlockSize) {
    throw ValidationError("block size out of range in '" + std::string(text) + "'");
  }
  return value;
}

void skip_spaces(std::string_view text, std::size_t& pos) {
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
}

}  // namespace

BlockShape::BlockShape(std::vector<int> blocks) {
  if (blocks.empty()) throw ValidationError("a shape needs at least one block");
  for (int n : blocks) {
    if (n < 1) throw ValidationError("block size must be ≥ 1");
  }
  for (int n : blocks) {
    dimension_ += n * n;
    matrix_size_ += n;
  }
  blocks_ = std::make_shared<const std::vector<int>>(std::move(blocks));
}

BlockShape BlockShape::parse(std::string_view text) {
  std::vector<int> blocks;
  std::size_t pos = 0;
  skip_spaces(text, pos);
  if (pos == text.size()) throw ValidationError("empty shape descriptor");
  while (true) {
    skip_spaces(text, pos);
    if (pos < text.size() && text[pos] == 'M') {
      ++pos;
      blocks.push_back(read_int(text, pos, "'M'"));
    } else if (text.substr(pos, 2) == "C^") {
      pos += 2;
      int count = read_int(text, pos, "'C^'");
      if (count < 1) throw ValidationError("C^k needs k ≥ 1");
      blocks.insert(blocks.end(), static_cast<std::size_t>(count), 1);
    } else {
      throw ValidationError("malformed shape '" + std::string(text) + "': expected 'M<n>' or 'C^<k>' at offset " +
                            std::to_string(pos));
    }
    skip_spaces(text, pos);
    if (pos == text.size()) break;
    if (text[pos] != '+') {
      throw ValidationError("malformed shape '" + std::string(text) + "': expected '+' at offset " +
                            std::to_string(pos));
    }
    ++pos;
  }
  return BlockShape(std::move(blocks));
}

int BlockShape::max_block() const { return *std::max_element(blocks_->begin(), blocks_->end()); }

bool BlockShape::is_commutative() const {
  return std::all_of(blocks_->begin(), blocks_->end(), [](int n) { return n == 1; });
}

std::string BlockShape::to_string() const {
  if (num_blocks() > 1 && is_commutative()) return "C^" + std::to_string(num_blocks());
  std::string out;
  for (std::size_t i = 0; i < num_blocks(); ++i) {
    if (i) out += '+';
    out += 'M';
    out += std::to_string(block(i));
  }
  return out;
}

BlockShape direct_sum(const BlockShape& a, const BlockShape& b) {
  std::vector<int> blocks(a.blocks().begin(), a.blocks().end());
  blocks.insert(blocks.end(), b.blocks().begin(), b.blocks().end());
  return BlockShape(std::move(blocks));
}

BlockShape tensor_matrix(const BlockShape& a, int n) {
  if (n < 1) throw ValidationError("tensor factor M_n needs n ≥ 1");
  std::vector<int> blocks;
  blocks.reserve(a.num_blocks());
  for (int b : a.blocks()) blocks.push_back(b * n);
  return BlockShape(std::move(blocks));
}

}  // namespace csw
