#include "suite.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <random>

#include "prodcrit/product.hpp"

namespace prodcrit::testing {

BlockProductState random_block_product(const std::vector<int>& group_sizes, std::uint64_t seed, bool shuffle) {
  std::mt19937_64 rng(seed);
  const int n = std::accumulate(group_sizes.begin(), group_sizes.end(), 0);

  std::vector<Partition::Block> blocks;
  std::optional<DensityMatrix> rho;
  int next_label = 1;
  for (int size : group_sizes) {
    Dims dims;
    Partition::Block block;
    for (int k = 0; k < size; ++k) {
      // Keep total dimension moderate: at most one 3-dimensional subsystem per block.
      dims.push_back(k == 0 && rng() % 3 == 0 ? 3 : 2);
      block.push_back(next_label++);
    }
    const bool pure = size >= 2 && rng() % 2 == 0;
    DensityMatrix factor = pure ? density_from_pure(gen_random_pure(dims, rng())) : gen_random_density(dims, rng());
    rho = rho ? tensor(*rho, factor) : factor;
    blocks.push_back(std::move(block));
  }

  SubsystemList perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 1);
  if (shuffle) std::shuffle(perm.begin(), perm.end(), rng);
  // New position k holds old subsystem perm[k]; old label o moves to inverse[o].
  const SubsystemList inverse = inverse_permutation(perm);
  for (auto& block : blocks) {
    for (int& label : block) label = inverse[static_cast<std::size_t>(label - 1)];
  }

  std::string label = "blocks";
  for (int size : group_sizes) label += "-" + std::to_string(size);
  label += " seed " + std::to_string(seed);
  return {label, permute_subsystems(*rho, perm), Partition::from_blocks(std::move(blocks), n)};
}

std::vector<std::vector<int>> compositions(int n) {
  std::vector<std::vector<int>> out;
  for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
    std::vector<int> parts{1};
    for (int k = 0; k < n - 1; ++k) {
      if (mask & (1u << k)) {
        parts.push_back(1);
      } else {
        ++parts.back();
      }
    }
    out.push_back(std::move(parts));
  }
  return out;
}

std::vector<BlockProductState> block_product_suite(int count, std::uint64_t seed) {
  std::vector<std::vector<int>> structures = compositions(3);
  for (auto& c : compositions(4)) structures.push_back(std::move(c));
  std::vector<BlockProductState> out;
  for (int k = 0; k < count; ++k) {
    const auto& structure = structures[static_cast<std::size_t>(k) % structures.size()];
    out.push_back(random_block_product(structure, seed + static_cast<std::uint64_t>(k)));
  }
  return out;
}

}  // namespace prodcrit::testing
