#pragma once

#include <optional>
#include <span>
#include <vector>

#include "prodcrit/partitions.hpp"
#include "prodcrit/states.hpp"

namespace prodcrit {

/// Residual non-Hermiticity or negativity an extracted factor may carry before
/// it is treated as a failed factorization.
inline constexpr double kFactorRepairTolerance = 1e-7;

/// Smallest |Tr X| accepted when normalizing a Schmidt factor.
inline constexpr double kDegenerateTraceTolerance = 1e-12;

/// A density matrix reordered so one subsystem group leads, ready for realignment
/// as an (m x m) grid of (n x n) blocks.
struct BipartiteView {
  ComplexMatrix matrix;
  Index m = 0;
  Index n = 0;
  SubsystemList permutation;  // position k holds original subsystem permutation[k]
};

/// Outcome of a rank-of-realignment test across one bipartition.
struct ProductReport {
  Partition partition;
  bool is_product = false;
  std::vector<double> singular_values;  // all min(m^2, n^2) values, nonincreasing
  std::size_t rank = 0;
  double ratio = 0.0;  // sigma_2 / sigma_1, 0 with fewer than two values
  double rel_tol = kDefaultRankTolerance;
  /// One factor per partition block, in block order. Present iff is_product and
  /// factors were requested.
  std::optional<std::vector<DensityMatrix>> factors;
  /// Largest correction applied while projecting factors onto valid states.
  double factor_adjustment = 0.0;
};

struct SemiproductResult {
  bool is_semiproduct = false;
  std::vector<ProductReport> reports;  // one per i|rest, i = 1..N
};

struct FullyProductResult {
  bool is_fully_product = false;
  std::vector<ProductReport> reports;  // the semiproduct scan
  std::optional<std::vector<DensityMatrix>> factors;  // rho_1 .. rho_N when true
};

struct KProductResult {
  bool is_k_product = false;
  Dims coarse_dims;
  /// Composite one-vs-rest reports; partition labels refer to blocks 1..k.
  std::vector<ProductReport> reports;
};

/// One accepted split made while searching for the finest partition. The
/// report's partition uses local labels 1..labels.size(); local label j is
/// original subsystem labels[j - 1].
struct SplitRecord {
  SubsystemList labels;
  ProductReport report;
};

/// Finest product decomposition rho = rho_{A_1} (x) ... (x) rho_{A_k}.
struct FactorizationTree {
  Partition partition;
  std::vector<DensityMatrix> factors;  // factors[t] lives on partition.block(t)
  std::vector<SplitRecord> splits;     // in the order they were found
};

/// Moves the subsystems of `leading` (in the given order) to the front, the rest
/// after them in ascending order.
BipartiteView bipartite_view(const DensityMatrix& rho, std::span<const int> leading);

/// View for a canonical bipartition (the block containing subsystem 1 leads).
BipartiteView bipartite_view(const DensityMatrix& rho, const Partition& bipartition);

ProductReport is_product_bipartition(const DensityMatrix& rho, const Partition& bipartition,
                                     double rel_tol = kDefaultRankTolerance);

/// Rank test plus factor extraction. For a non-product split the report has no
/// factors (is_product == false). Throws DegenerateFactorError when the single
/// Schmidt term cannot be normalized into valid density matrices.
ProductReport factorize_bipartition(const DensityMatrix& rho, const Partition& bipartition,
                                    double rel_tol = kDefaultRankTolerance);

SemiproductResult is_semiproduct(const DensityMatrix& rho, double rel_tol = kDefaultRankTolerance);

/// Decides via the semiproduct scan, then peels off one subsystem at a time.
/// Throws InconsistencyError if the peeling disagrees with the scan.
FullyProductResult is_fully_product(const DensityMatrix& rho, double rel_tol = kDefaultRankTolerance);

/// Semiproduct test on the state coarse-grained by `partition` (k >= 2).
KProductResult is_k_product(const DensityMatrix& rho, const Partition& partition,
                            double rel_tol = kDefaultRankTolerance);

/// Greedy search: split off the smallest product block containing the lowest
/// remaining label, then recurse on both factors.
FactorizationTree finest_product_partition(const DensityMatrix& rho, double rel_tol = kDefaultRankTolerance);

/// Tensor product of block factors, permuted back to the original subsystem
/// order. Inverse of what finest_product_partition and factorize_bipartition emit.
ComplexMatrix reconstruct(const Partition& partition, std::span<const DensityMatrix> factors);

/// ||a - b||_F / ||b||_F.
double relative_frobenius_error(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace prodcrit
