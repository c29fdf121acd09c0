#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace csw {

/// Raised for malformed user input: shape descriptors, element payloads,
/// out-of-range parameters. The CLI maps it to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Isomorphism class of a finite-dimensional C*-algebra M_{n1} + ... + M_{nk}.
///
/// The block list is kept in the order given; two shapes with permuted
/// blocks are isomorphic but compare unequal. Copies share storage.
class BlockShape {
 public:
  explicit BlockShape(std::vector<int> blocks);

  /// Parses `M2+M3`, `C^4`, `M1`, ... (`C^k` expands to k blocks of size 1).
  static BlockShape parse(std::string_view descriptor);

  std::span<const int> blocks() const { return *blocks_; }
  std::size_t num_blocks() const { return blocks_->size(); }
  int block(std::size_t i) const { return (*blocks_)[i]; }

  /// Sum of n_i^2, the complex vector-space dimension.
  int dimension() const { return dimension_; }
  /// Sum of n_i, the size of the ambient matrix algebra M_{sum n_i}.
  int matrix_size() const { return matrix_size_; }
  /// Largest block size.
  int max_block() const;

  bool is_commutative() const;
  bool is_matrix_algebra() const { return num_blocks() == 1; }

  std::string to_string() const;

  friend bool operator==(const BlockShape& a, const BlockShape& b) {
    return a.blocks_ == b.blocks_ || *a.blocks_ == *b.blocks_;
  }

 private:
  std::shared_ptr<const std::vector<int>> blocks_;
  int dimension_ = 0;
  int matrix_size_ = 0;
};

BlockShape direct_sum(const BlockShape& a, const BlockShape& b);

/// M_n tensor A: every block is scaled by n.
BlockShape tensor_matrix(const BlockShape& a, int n);

}  // namespace csw
