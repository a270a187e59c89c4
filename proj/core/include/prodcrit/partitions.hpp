#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "prodcrit/states.hpp"

namespace prodcrit {

/// A k-partition A_1 | ... | A_k of the subsystem labels {1..N}.
///
/// Always held in canonical form: indices ascending within a block, blocks
/// ordered by their smallest index. A bipartition S|S' is therefore stored with
/// the block containing subsystem 1 first.
class Partition {
 public:
  using Block = std::vector<int>;

  /// Throws PartitionError unless the blocks are nonempty, pairwise disjoint and
  /// cover 1..n exactly.
  static Partition from_blocks(std::vector<Block> blocks, int n);

  /// Every subsystem in a block of its own.
  static Partition finest(int n);
  /// All subsystems in one block.
  static Partition single_block(int n);

  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  const Block& block(std::size_t t) const { return blocks_.at(t); }
  std::size_t size() const noexcept { return blocks_.size(); }
  int num_subsystems() const noexcept { return n_; }

  /// Concatenation of the blocks, a permutation of 1..N that makes each block contiguous.
  SubsystemList flattened() const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  Partition(std::vector<Block> blocks, int n) : blocks_(std::move(blocks)), n_(n) {}

  std::vector<Block> blocks_;
  int n_ = 0;
};

/// The 2^(N-1) - 1 bipartitions S|S' with 1 in S, ordered by |S| then lexicographically.
std::vector<Partition> enumerate_bipartitions(int n);

/// The partitions i|rest, i = 1..N, in canonical form. For N = 2 the two
/// coincide and only 1|2 is returned.
std::vector<Partition> one_vs_rest_partitions(int n);

/// Entry t is the product of the dims in block t.
Dims coarse_grain_dims(const Dims& dims, const Partition& partition);

/// Parses `block ("|" block)*`, `block = index ("," index)*`. Whitespace is ignored.
/// Throws ParseError on syntax errors, duplicate, out-of-range or missing indices.
Partition parse_partition(std::string_view text, int n);

/// Like parse_partition but keeps the blocks in the order written (indices
/// within a block still sorted).
std::vector<Partition::Block> parse_blocks(std::string_view text, int n);

/// Canonical text, e.g. "1,2|3".
std::string format_partition(const Partition& partition);
std::string format_block(const Partition::Block& block);

}  // namespace prodcrit
