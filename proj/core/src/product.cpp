#include "prodcrit/product.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "prodcrit/error.hpp"

namespace prodcrit {

namespace {

void require_bipartition(const DensityMatrix& rho, const Partition& partition, const char* what) {
  if (partition.size() != 2) {
    throw PartitionError(std::string(what) + ": expected a bipartition, got " + std::to_string(partition.size()) +
                         " blocks");
  }
  if (partition.num_subsystems() != rho.num_subsystems()) {
    throw PartitionError(std::string(what) + ": partition covers " + std::to_string(partition.num_subsystems()) +
                         " subsystems but the state has " + std::to_string(rho.num_subsystems()));
  }
}

Dims dims_of(const DensityMatrix& rho, const Partition::Block& block) {
  Dims out;
  for (int label : block) out.push_back(rho.dims()[static_cast<std::size_t>(label - 1)]);
  return out;
}

// Turns one operator-Schmidt factor into a density matrix: divide by the trace
// (removes the joint scale and phase), then project onto Hermitian PSD matrices.
DensityMatrix normalize_factor(const ComplexMatrix& x, Dims dims, double& adjustment) {
  const Complex trace = x.trace();
  if (std::abs(trace) < kDegenerateTraceTolerance) {
    throw DegenerateFactorError("factor has vanishing trace (|Tr| = " + std::to_string(std::abs(trace)) +
                                "); the state is numerically not a product");
  }
  ComplexMatrix factor = x / trace;
  double correction = hermitian_error(factor);
  factor = ((factor + factor.adjoint()) / 2.0).eval();

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(factor);
  if (solver.info() != Eigen::Success) throw NumericalError("factor eigendecomposition failed");
  const double min_eigenvalue = solver.eigenvalues()(0);
  if (min_eigenvalue < 0.0) {
    correction = std::max(correction, -min_eigenvalue);
    const RealVector clipped = solver.eigenvalues().cwiseMax(0.0);
    factor = solver.eigenvectors() * clipped.asDiagonal() * solver.eigenvectors().adjoint();
  }
  if (correction > kFactorRepairTolerance) {
    throw DegenerateFactorError("extracted factor is not a density matrix (correction " +
                                std::to_string(correction) + " exceeds tolerance)");
  }
  factor /= factor.trace().real();
  adjustment = std::max(adjustment, correction);
  return DensityMatrix::from_matrix(std::move(dims), std::move(factor));
}

ProductReport analyze_split(const DensityMatrix& rho, const Partition& bipartition, double rel_tol,
                            bool want_factors) {
  const BipartiteView view = bipartite_view(rho, bipartition);
  const SvdResult decomposition = svd(realign(view.matrix, view.m, view.n));

  ProductReport report{bipartition, false, {}, 0, 0.0, rel_tol, std::nullopt, 0.0};
  const RealVector& sigmas = decomposition.singular_values;
  report.singular_values.assign(sigmas.data(), sigmas.data() + sigmas.size());
  report.rank = numerical_rank(sigmas, rel_tol);
  report.ratio = (sigmas.size() >= 2 && sigmas(0) > 0.0) ? sigmas(1) / sigmas(0) : 0.0;
  report.is_product = report.rank == 1;

  if (want_factors && report.is_product) {
    // Leading term: vec(X) = sqrt(s) u_1, vec(Y) = sqrt(s) conj(v_1).
    const double root = std::sqrt(sigmas(0));
    const ComplexMatrix x = unvec(root * decomposition.left.col(0), view.m, view.m);
    const ComplexMatrix y = unvec(root * decomposition.right.col(0).conjugate(), view.n, view.n);
    std::vector<DensityMatrix> factors;
    factors.push_back(normalize_factor(x, dims_of(rho, bipartition.block(0)), report.factor_adjustment));
    factors.push_back(normalize_factor(y, dims_of(rho, bipartition.block(1)), report.factor_adjustment));
    report.factors = std::move(factors);
  }
  return report;
}

void split_recursively(const DensityMatrix& rho, const SubsystemList& labels, double rel_tol,
                       std::vector<std::pair<Partition::Block, DensityMatrix>>& blocks,
                       std::vector<SplitRecord>& splits) {
  const int n = rho.num_subsystems();
  if (n >= 2) {
    for (const Partition& candidate : enumerate_bipartitions(n)) {
      if (!is_product_bipartition(rho, candidate, rel_tol).is_product) continue;
      ProductReport report = factorize_bipartition(rho, candidate, rel_tol);
      std::vector<DensityMatrix> factors = std::move(*report.factors);
      std::array<SubsystemList, 2> sublabels;
      for (std::size_t t = 0; t < 2; ++t) {
        for (int local : candidate.block(t)) sublabels[t].push_back(labels[static_cast<std::size_t>(local - 1)]);
      }
      splits.push_back({labels, std::move(report)});
      split_recursively(factors[0], sublabels[0], rel_tol, blocks, splits);
      split_recursively(factors[1], sublabels[1], rel_tol, blocks, splits);
      return;
    }
  }
  blocks.emplace_back(labels, rho);
}

}  // namespace

BipartiteView bipartite_view(const DensityMatrix& rho, std::span<const int> leading) {
  const int n = rho.num_subsystems();
  if (leading.empty() || static_cast<int>(leading.size()) >= n) {
    throw PartitionError("bipartite_view: leading group must be a nonempty proper subset of 1.." +
                         std::to_string(n));
  }
  SubsystemList permutation(leading.begin(), leading.end());
  for (int label = 1; label <= n; ++label) {
    if (std::find(leading.begin(), leading.end(), label) == leading.end()) permutation.push_back(label);
  }
  if (static_cast<int>(permutation.size()) != n) {
    throw PartitionError("bipartite_view: leading group has duplicate or out-of-range labels");
  }

  BipartiteView view;
  view.matrix = permute_subsystems(rho.matrix(), rho.dims(), permutation);
  view.m = 1;
  for (int label : leading) {
    if (label < 1 || label > n) throw PartitionError("bipartite_view: label out of range");
    view.m *= rho.dims()[static_cast<std::size_t>(label - 1)];
  }
  view.n = rho.dimension() / view.m;
  view.permutation = std::move(permutation);
  return view;
}

BipartiteView bipartite_view(const DensityMatrix& rho, const Partition& bipartition) {
  require_bipartition(rho, bipartition, "bipartite_view");
  return bipartite_view(rho, std::span<const int>(bipartition.block(0)));
}

ProductReport is_product_bipartition(const DensityMatrix& rho, const Partition& bipartition, double rel_tol) {
  require_bipartition(rho, bipartition, "is_product_bipartition");
  return analyze_split(rho, bipartition, rel_tol, false);
}

ProductReport factorize_bipartition(const DensityMatrix& rho, const Partition& bipartition, double rel_tol) {
  require_bipartition(rho, bipartition, "factorize_bipartition");
  return analyze_split(rho, bipartition, rel_tol, true);
}

SemiproductResult is_semiproduct(const DensityMatrix& rho, double rel_tol) {
  SemiproductResult result;
  result.is_semiproduct = true;
  for (const Partition& split : one_vs_rest_partitions(rho.num_subsystems())) {
    result.reports.push_back(is_product_bipartition(rho, split, rel_tol));
    result.is_semiproduct = result.is_semiproduct && result.reports.back().is_product;
  }
  return result;
}

FullyProductResult is_fully_product(const DensityMatrix& rho, double rel_tol) {
  FullyProductResult result;
  SemiproductResult scan = is_semiproduct(rho, rel_tol);
  result.is_fully_product = scan.is_semiproduct;
  result.reports = std::move(scan.reports);
  if (!result.is_fully_product) return result;

  std::vector<DensityMatrix> factors;
  DensityMatrix remainder = rho;
  while (remainder.num_subsystems() > 1) {
    const int n = remainder.num_subsystems();
    Partition::Block rest(static_cast<std::size_t>(n - 1));
    std::iota(rest.begin(), rest.end(), 2);
    const Partition peel = Partition::from_blocks({{1}, std::move(rest)}, n);
    ProductReport step = factorize_bipartition(remainder, peel, rel_tol);
    if (!step.is_product) {
      throw InconsistencyError("semiproduct scan passed but peeling subsystem " +
                               std::to_string(rho.num_subsystems() - n + 1) + " failed (ratio " +
                               std::to_string(step.ratio) + ")");
    }
    factors.push_back(std::move((*step.factors)[0]));
    remainder = std::move((*step.factors)[1]);
  }
  factors.push_back(std::move(remainder));
  result.factors = std::move(factors);
  return result;
}

KProductResult is_k_product(const DensityMatrix& rho, const Partition& partition, double rel_tol) {
  if (partition.size() < 2) throw PartitionError("is_k_product: need at least 2 blocks");
  if (partition.num_subsystems() != rho.num_subsystems()) {
    throw PartitionError("is_k_product: partition does not match the number of subsystems");
  }
  KProductResult result;
  result.coarse_dims = coarse_grain_dims(rho.dims(), partition);
  const SubsystemList order = partition.flattened();
  const DensityMatrix coarse =
      DensityMatrix::from_matrix(result.coarse_dims, permute_subsystems(rho.matrix(), rho.dims(), order));
  SemiproductResult scan = is_semiproduct(coarse, rel_tol);
  result.is_k_product = scan.is_semiproduct;
  result.reports = std::move(scan.reports);
  return result;
}

FactorizationTree finest_product_partition(const DensityMatrix& rho, double rel_tol) {
  const int n = rho.num_subsystems();
  SubsystemList labels(static_cast<std::size_t>(n));
  std::iota(labels.begin(), labels.end(), 1);

  std::vector<std::pair<Partition::Block, DensityMatrix>> blocks;
  FactorizationTree tree{Partition::single_block(n), {}, {}};
  split_recursively(rho, labels, rel_tol, blocks, tree.splits);

  std::sort(blocks.begin(), blocks.end(), [](const auto& l, const auto& r) { return l.first.front() < r.first.front(); });
  std::vector<Partition::Block> partition_blocks;
  for (auto& [block, factor] : blocks) {
    partition_blocks.push_back(block);
    tree.factors.push_back(std::move(factor));
  }
  tree.partition = Partition::from_blocks(std::move(partition_blocks), n);
  return tree;
}

ComplexMatrix reconstruct(const Partition& partition, std::span<const DensityMatrix> factors) {
  if (factors.size() != partition.size()) {
    throw DimensionError("reconstruct: " + std::to_string(factors.size()) + " factors for " +
                         std::to_string(partition.size()) + " blocks");
  }
  Dims dims;
  ComplexMatrix product = ComplexMatrix::Ones(1, 1);
  for (std::size_t t = 0; t < factors.size(); ++t) {
    if (factors[t].num_subsystems() != static_cast<int>(partition.block(t).size())) {
      throw DimensionError("reconstruct: factor " + std::to_string(t + 1) + " does not match its block");
    }
    dims.insert(dims.end(), factors[t].dims().begin(), factors[t].dims().end());
    product = kron(product, factors[t].matrix());
  }
  return permute_subsystems(product, dims, inverse_permutation(partition.flattened()));
}

double relative_frobenius_error(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("relative_frobenius_error: shape mismatch");
  const double scale = b.norm();
  return scale == 0.0 ? (a - b).norm() : (a - b).norm() / scale;
}

}  // namespace prodcrit
