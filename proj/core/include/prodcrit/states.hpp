#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "prodcrit/matcore.hpp"

namespace prodcrit {

/// Subsystem dimensions d_1..d_N.
using Dims = std::vector<Index>;

/// Subsystem labels are 1-based throughout the library.
using SubsystemList = std::vector<int>;

Index total_dimension(std::span<const Index> dims);

/// Two-level validation band. Deviations up to `accept` are stored verbatim,
/// deviations in (accept, reject] are repaired (Hermitian part, eigenvalue
/// clipping, trace or norm renormalization), anything beyond `reject` throws
/// ValidationError.
struct ValidationTolerance {
  double accept = 1e-9;
  double reject = 1e-6;
};

/// Hermitian, positive semidefinite, unit-trace matrix over a list of subsystems.
class DensityMatrix {
 public:
  /// Validates and (within the repair band) cleans up `matrix`.
  static DensityMatrix from_matrix(Dims dims, ComplexMatrix matrix, ValidationTolerance tol = {});

  const Dims& dims() const noexcept { return dims_; }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  int num_subsystems() const noexcept { return static_cast<int>(dims_.size()); }
  Index dimension() const noexcept { return matrix_.rows(); }

 private:
  DensityMatrix(Dims dims, ComplexMatrix matrix) : dims_(std::move(dims)), matrix_(std::move(matrix)) {}

  Dims dims_;
  ComplexMatrix matrix_;
};

/// Unit vector over a list of subsystems. Basis index of |i_1 ... i_N> is
/// i_N + d_N * (i_{N-1} + d_{N-1} * (...)), i.e. subsystem 1 is most significant.
class PureState {
 public:
  static PureState from_amplitudes(Dims dims, ComplexVector amplitudes, ValidationTolerance tol = {});

  const Dims& dims() const noexcept { return dims_; }
  const ComplexVector& amplitudes() const noexcept { return amplitudes_; }
  int num_subsystems() const noexcept { return static_cast<int>(dims_.size()); }

 private:
  PureState(Dims dims, ComplexVector amplitudes)
      : dims_(std::move(dims)), amplitudes_(std::move(amplitudes)) {}

  Dims dims_;
  ComplexVector amplitudes_;
};

DensityMatrix density_from_pure(const PureState& psi);

/// rho_a (x) rho_b with dims concatenated.
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// Reduced state on `keep` (1-based labels, any order); retained subsystems keep
/// their original relative order. Throws PartitionError on empty, duplicate or
/// out-of-range labels.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);

/// Reorders subsystems: position k of the result holds subsystem perm[k] of rho
/// (1-based). Throws PartitionError unless perm is a permutation of 1..N.
DensityMatrix permute_subsystems(const DensityMatrix& rho, std::span<const int> perm);
ComplexMatrix permute_subsystems(const ComplexMatrix& matrix, std::span<const Index> dims,
                                 std::span<const int> perm);

SubsystemList inverse_permutation(std::span<const int> perm);

/// p (|00><00| + |11><11|) / 2 + (1 - p) I_4 / 4 on two qubits.
DensityMatrix gen_example1(double p);
/// (|000> + |110>) / sqrt(2).
PureState gen_example2();
/// (|0...0> + |1...1>) / sqrt(2) on n qubits.
PureState gen_ghz(int n);
/// Equal superposition of the n single-excitation basis states.
PureState gen_w(int n);
/// (|00> + |11>) / sqrt(2).
PureState gen_bell();
/// |0...0> over the given dims.
PureState gen_basis_zero(const Dims& dims);
DensityMatrix gen_maximally_mixed(const Dims& dims);

/// G G^dagger / Tr(G G^dagger) with G a square matrix of i.i.d. standard complex
/// Gaussians drawn from a generator seeded with `seed`. Full rank almost surely.
DensityMatrix gen_random_density(const Dims& dims, std::uint64_t seed);

/// Haar-distributed unit vector (normalized complex Gaussian).
PureState gen_random_pure(const Dims& dims, std::uint64_t seed);

/// Tensor product of independent random densities, one per group of dims.
/// gen_random_product({{2, 2}, {3}}, s) has dims [2, 2, 3].
DensityMatrix gen_random_product(const std::vector<Dims>& groups, std::uint64_t seed);

/// Haar-random d x d unitary (QR of a complex Gaussian matrix with phase fix).
ComplexMatrix gen_random_unitary(Index d, std::uint64_t seed);

}  // namespace prodcrit
