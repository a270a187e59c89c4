#include "prodcrit/partitions.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "prodcrit/error.hpp"

namespace prodcrit {

namespace {

void require_at_least_two(int n, const char* what) {
  if (n < 2) throw PartitionError(std::string(what) + ": need at least 2 subsystems, got " + std::to_string(n));
}

}  // namespace

Partition Partition::from_blocks(std::vector<Block> blocks, int n) {
  if (n < 1) throw PartitionError("partition: number of subsystems must be positive");
  if (blocks.empty()) throw PartitionError("partition: no blocks");
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  int covered = 0;
  for (Block& block : blocks) {
    if (block.empty()) throw PartitionError("partition: empty block");
    for (int label : block) {
      if (label < 1 || label > n) {
        throw PartitionError("partition: index " + std::to_string(label) + " outside 1.." + std::to_string(n));
      }
      if (seen[static_cast<std::size_t>(label - 1)]) {
        throw PartitionError("partition: index " + std::to_string(label) + " appears twice");
      }
      seen[static_cast<std::size_t>(label - 1)] = true;
      ++covered;
    }
    std::sort(block.begin(), block.end());
  }
  if (covered != n) {
    const auto missing = std::find(seen.begin(), seen.end(), false) - seen.begin() + 1;
    throw PartitionError("partition: index " + std::to_string(missing) + " is not covered");
  }
  std::sort(blocks.begin(), blocks.end(), [](const Block& l, const Block& r) { return l.front() < r.front(); });
  return Partition(std::move(blocks), n);
}

Partition Partition::finest(int n) {
  std::vector<Block> blocks;
  for (int label = 1; label <= n; ++label) blocks.push_back({label});
  return from_blocks(std::move(blocks), n);
}

Partition Partition::single_block(int n) {
  Block all(static_cast<std::size_t>(std::max(n, 0)));
  std::iota(all.begin(), all.end(), 1);
  return from_blocks({std::move(all)}, n);
}

SubsystemList Partition::flattened() const {
  SubsystemList out;
  out.reserve(static_cast<std::size_t>(n_));
  for (const Block& block : blocks_) out.insert(out.end(), block.begin(), block.end());
  return out;
}

std::vector<Partition> enumerate_bipartitions(int n) {
  require_at_least_two(n, "enumerate_bipartitions");
  if (n > 30) throw PartitionError("enumerate_bipartitions: too many subsystems");
  // Subsystem 1 is always in S; the other N-1 labels are chosen by a bitmask.
  // The full mask would leave S' empty and is excluded.
  const unsigned long long full = (1ULL << (n - 1)) - 1;
  std::vector<Partition::Block> leading;
  for (unsigned long long mask = 0; mask < full; ++mask) {
    Partition::Block s{1};
    for (int bit = 0; bit < n - 1; ++bit) {
      if (mask & (1ULL << bit)) s.push_back(bit + 2);
    }
    leading.push_back(std::move(s));
  }
  std::sort(leading.begin(), leading.end(), [](const Partition::Block& l, const Partition::Block& r) {
    if (l.size() != r.size()) return l.size() < r.size();
    return l < r;
  });

  std::vector<Partition> out;
  out.reserve(leading.size());
  for (auto& s : leading) {
    Partition::Block rest;
    for (int label = 2; label <= n; ++label) {
      if (!std::binary_search(s.begin(), s.end(), label)) rest.push_back(label);
    }
    out.push_back(Partition::from_blocks({std::move(s), std::move(rest)}, n));
  }
  return out;
}

std::vector<Partition> one_vs_rest_partitions(int n) {
  require_at_least_two(n, "one_vs_rest_partitions");
  std::vector<Partition> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    Partition::Block rest;
    for (int label = 1; label <= n; ++label) {
      if (label != i) rest.push_back(label);
    }
    out.push_back(Partition::from_blocks({{i}, std::move(rest)}, n));
  }
  // With two subsystems 1|2 and 2|1 are the same split.
  if (n == 2) out.pop_back();
  return out;
}

Dims coarse_grain_dims(const Dims& dims, const Partition& partition) {
  if (static_cast<int>(dims.size()) != partition.num_subsystems()) {
    throw PartitionError("coarse_grain_dims: partition covers " + std::to_string(partition.num_subsystems()) +
                         " subsystems but dims has " + std::to_string(dims.size()));
  }
  Dims out;
  out.reserve(partition.size());
  for (const auto& block : partition.blocks()) {
    Index product = 1;
    for (int label : block) product *= dims[static_cast<std::size_t>(label - 1)];
    out.push_back(product);
  }
  return out;
}

std::vector<Partition::Block> parse_blocks(std::string_view text, int n) {
  if (n < 1) throw ParseError("number of subsystems must be positive", 0);
  std::vector<Partition::Block> blocks(1);
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  enum class Expect { Index, Separator } expect = Expect::Index;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char c = text[pos];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++pos;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      if (expect != Expect::Index) throw ParseError("expected ',' or '|'", pos);
      const std::size_t start = pos;
      long long value = 0;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        value = value * 10 + (text[pos] - '0');
        if (value > n) value = static_cast<long long>(n) + 1;  // saturate; reported below
        ++pos;
      }
      if (value < 1 || value > n) {
        throw ParseError("index " + std::string(text.substr(start, pos - start)) + " outside 1.." +
                             std::to_string(n),
                         start);
      }
      if (seen[static_cast<std::size_t>(value - 1)]) {
        throw ParseError("duplicate index " + std::to_string(value), start);
      }
      seen[static_cast<std::size_t>(value - 1)] = true;
      blocks.back().push_back(static_cast<int>(value));
      expect = Expect::Separator;
      continue;
    }
    if (c == ',' || c == '|') {
      if (expect != Expect::Separator) throw ParseError("expected an index", pos);
      if (c == '|') blocks.emplace_back();
      expect = Expect::Index;
      ++pos;
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos);
  }
  if (expect != Expect::Separator) throw ParseError("expected an index", text.size());
  const auto missing = std::find(seen.begin(), seen.end(), false);
  if (missing != seen.end()) {
    throw ParseError("index " + std::to_string(missing - seen.begin() + 1) + " is missing", text.size());
  }
  for (auto& block : blocks) std::sort(block.begin(), block.end());
  return blocks;
}

Partition parse_partition(std::string_view text, int n) { return Partition::from_blocks(parse_blocks(text, n), n); }

std::string format_block(const Partition::Block& block) {
  std::string out;
  for (std::size_t k = 0; k < block.size(); ++k) {
    if (k > 0) out += ',';
    out += std::to_string(block[k]);
  }
  return out;
}

std::string format_partition(const Partition& partition) {
  std::string out;
  for (std::size_t t = 0; t < partition.size(); ++t) {
    if (t > 0) out += '|';
    out += format_block(partition.block(t));
  }
  return out;
}

}  // namespace prodcrit
