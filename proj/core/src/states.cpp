#include "prodcrit/states.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "prodcrit/error.hpp"

namespace prodcrit {

namespace {

constexpr double kPureNormAccept = 1e-12;

void check_dims(const Dims& dims, const char* what) {
  if (dims.empty()) throw DimensionError(std::string(what) + ": empty dimension list");
  for (Index d : dims) {
    if (d <= 0) throw DimensionError(std::string(what) + ": subsystem dimensions must be positive");
  }
}

ComplexMatrix gaussian_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

void check_labels(std::span<const int> labels, int n, const char* what) {
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int label : labels) {
    if (label < 1 || label > n) {
      throw PartitionError(std::string(what) + ": subsystem label " + std::to_string(label) +
                           " outside 1.." + std::to_string(n));
    }
    if (seen[static_cast<std::size_t>(label - 1)]) {
      throw PartitionError(std::string(what) + ": duplicate subsystem label " + std::to_string(label));
    }
    seen[static_cast<std::size_t>(label - 1)] = true;
  }
}

}  // namespace

Index total_dimension(std::span<const Index> dims) {
  Index total = 1;
  for (Index d : dims) total *= d;
  return total;
}

DensityMatrix DensityMatrix::from_matrix(Dims dims, ComplexMatrix matrix, ValidationTolerance tol) {
  check_dims(dims, "DensityMatrix");
  const Index side = total_dimension(dims);
  if (matrix.rows() != side || matrix.cols() != side) {
    throw DimensionError("DensityMatrix: expected a " + std::to_string(side) + "x" +
                         std::to_string(side) + " matrix, got " + std::to_string(matrix.rows()) +
                         "x" + std::to_string(matrix.cols()));
  }
  if (!all_finite(matrix)) throw ValidationError("DensityMatrix: entries must be finite");

  const double asymmetry = hermitian_error(matrix);
  if (asymmetry > tol.reject) {
    throw ValidationError("DensityMatrix: not Hermitian (max |A - A^dagger| = " +
                          std::to_string(asymmetry) + ")");
  }
  if (asymmetry > tol.accept) matrix = ((matrix + matrix.adjoint()) / 2.0).eval();

  const Complex trace = matrix.trace();
  if (std::abs(trace - 1.0) > tol.reject) {
    throw ValidationError("DensityMatrix: trace " + std::to_string(trace.real()) + " is not 1");
  }

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(matrix);
  if (solver.info() != Eigen::Success) throw NumericalError("DensityMatrix: eigensolver failed");
  const double min_eigenvalue = solver.eigenvalues()(0);
  if (min_eigenvalue < -tol.reject) {
    throw ValidationError("DensityMatrix: negative eigenvalue " + std::to_string(min_eigenvalue));
  }
  if (min_eigenvalue < -tol.accept) {
    const RealVector clipped = solver.eigenvalues().cwiseMax(0.0);
    matrix = solver.eigenvectors() * clipped.asDiagonal() * solver.eigenvectors().adjoint();
  }

  const Complex repaired_trace = matrix.trace();
  if (std::abs(repaired_trace - 1.0) > tol.accept) matrix /= repaired_trace.real();

  return DensityMatrix(std::move(dims), std::move(matrix));
}

PureState PureState::from_amplitudes(Dims dims, ComplexVector amplitudes, ValidationTolerance tol) {
  check_dims(dims, "PureState");
  const Index side = total_dimension(dims);
  if (amplitudes.size() != side) {
    throw DimensionError("PureState: expected " + std::to_string(side) + " amplitudes, got " +
                         std::to_string(amplitudes.size()));
  }
  for (Index i = 0; i < amplitudes.size(); ++i) {
    if (!std::isfinite(amplitudes(i).real()) || !std::isfinite(amplitudes(i).imag())) {
      throw ValidationError("PureState: amplitudes must be finite");
    }
  }
  const double norm = amplitudes.norm();
  if (std::abs(norm - 1.0) > tol.reject) {
    throw ValidationError("PureState: norm " + std::to_string(norm) + " is not 1");
  }
  if (std::abs(norm - 1.0) > kPureNormAccept) amplitudes /= norm;
  return PureState(std::move(dims), std::move(amplitudes));
}

DensityMatrix density_from_pure(const PureState& psi) {
  const ComplexVector& a = psi.amplitudes();
  return DensityMatrix::from_matrix(psi.dims(), a * a.adjoint());
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return DensityMatrix::from_matrix(std::move(dims), kron(a.matrix(), b.matrix()));
}

SubsystemList inverse_permutation(std::span<const int> perm) {
  check_labels(perm, static_cast<int>(perm.size()), "inverse_permutation");
  SubsystemList inverse(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) {
    inverse[static_cast<std::size_t>(perm[k] - 1)] = static_cast<int>(k) + 1;
  }
  return inverse;
}

ComplexMatrix permute_subsystems(const ComplexMatrix& matrix, std::span<const Index> dims,
                                 std::span<const int> perm) {
  const int n = static_cast<int>(dims.size());
  if (static_cast<int>(perm.size()) != n) {
    throw PartitionError("permute_subsystems: permutation has " + std::to_string(perm.size()) +
                         " entries for " + std::to_string(n) + " subsystems");
  }
  check_labels(perm, n, "permute_subsystems");
  const Index side = total_dimension(dims);
  if (matrix.rows() != side || matrix.cols() != side) {
    throw DimensionError("permute_subsystems: matrix side does not match dims");
  }

  // Strides of the original layout: subsystem 1 is most significant.
  std::vector<Index> old_stride(static_cast<std::size_t>(n));
  Index stride = 1;
  for (int k = n - 1; k >= 0; --k) {
    old_stride[static_cast<std::size_t>(k)] = stride;
    stride *= dims[static_cast<std::size_t>(k)];
  }

  std::vector<Index> source(static_cast<std::size_t>(side));
  std::vector<Index> digits(static_cast<std::size_t>(n), 0);
  for (Index flat = 0; flat < side; ++flat) {
    Index old_flat = 0;
    for (int k = 0; k < n; ++k) {
      const auto src = static_cast<std::size_t>(perm[static_cast<std::size_t>(k)] - 1);
      old_flat += digits[static_cast<std::size_t>(k)] * old_stride[src];
    }
    source[static_cast<std::size_t>(flat)] = old_flat;
    // Increment the multi-index in the new order (last position fastest).
    for (int k = n - 1; k >= 0; --k) {
      const auto pos = static_cast<std::size_t>(k);
      const Index d = dims[static_cast<std::size_t>(perm[pos] - 1)];
      if (++digits[pos] < d) break;
      digits[pos] = 0;
    }
  }

  ComplexMatrix out(side, side);
  for (Index c = 0; c < side; ++c) {
    const Index src_c = source[static_cast<std::size_t>(c)];
    for (Index r = 0; r < side; ++r) out(r, c) = matrix(source[static_cast<std::size_t>(r)], src_c);
  }
  return out;
}

DensityMatrix permute_subsystems(const DensityMatrix& rho, std::span<const int> perm) {
  ComplexMatrix permuted = permute_subsystems(rho.matrix(), rho.dims(), perm);
  Dims dims(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) {
    dims[k] = rho.dims()[static_cast<std::size_t>(perm[k] - 1)];
  }
  return DensityMatrix::from_matrix(std::move(dims), std::move(permuted));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  const int n = rho.num_subsystems();
  if (keep.empty()) throw PartitionError("partial_trace: no subsystems to keep");
  check_labels(keep, n, "partial_trace");

  SubsystemList kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  SubsystemList order = kept;
  for (int label = 1; label <= n; ++label) {
    if (!std::binary_search(kept.begin(), kept.end(), label)) order.push_back(label);
  }

  const ComplexMatrix permuted = permute_subsystems(rho.matrix(), rho.dims(), order);
  Dims kept_dims;
  Index kept_side = 1;
  for (int label : kept) {
    kept_dims.push_back(rho.dims()[static_cast<std::size_t>(label - 1)]);
    kept_side *= kept_dims.back();
  }
  const Index traced_side = rho.dimension() / kept_side;

  ComplexMatrix reduced = ComplexMatrix::Zero(kept_side, kept_side);
  for (Index b = 0; b < kept_side; ++b) {
    for (Index a = 0; a < kept_side; ++a) {
      Complex sum = 0.0;
      for (Index t = 0; t < traced_side; ++t) sum += permuted(a * traced_side + t, b * traced_side + t);
      reduced(a, b) = sum;
    }
  }
  return DensityMatrix::from_matrix(std::move(kept_dims), std::move(reduced));
}

DensityMatrix gen_example1(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("gen_example1: p must lie in [0, 1]");
  ComplexMatrix rho = ComplexMatrix::Identity(4, 4) * ((1.0 - p) / 4.0);
  rho(0, 0) += p / 2.0;
  rho(3, 3) += p / 2.0;
  return DensityMatrix::from_matrix({2, 2}, std::move(rho));
}

PureState gen_example2() {
  ComplexVector psi = ComplexVector::Zero(8);
  psi(0) = 1.0 / std::sqrt(2.0);  // |000>
  psi(6) = 1.0 / std::sqrt(2.0);  // |110>
  return PureState::from_amplitudes({2, 2, 2}, std::move(psi));
}

PureState gen_ghz(int n) {
  if (n < 2) throw ValidationError("gen_ghz: need at least 2 qubits");
  const Index side = Index{1} << n;
  ComplexVector psi = ComplexVector::Zero(side);
  psi(0) = 1.0 / std::sqrt(2.0);
  psi(side - 1) = 1.0 / std::sqrt(2.0);
  return PureState::from_amplitudes(Dims(static_cast<std::size_t>(n), 2), std::move(psi));
}

PureState gen_w(int n) {
  if (n < 2) throw ValidationError("gen_w: need at least 2 qubits");
  const Index side = Index{1} << n;
  ComplexVector psi = ComplexVector::Zero(side);
  const double amplitude = 1.0 / std::sqrt(static_cast<double>(n));
  for (int k = 0; k < n; ++k) psi(Index{1} << k) = amplitude;
  return PureState::from_amplitudes(Dims(static_cast<std::size_t>(n), 2), std::move(psi));
}

PureState gen_bell() { return gen_ghz(2); }

PureState gen_basis_zero(const Dims& dims) {
  check_dims(dims, "gen_basis_zero");
  ComplexVector psi = ComplexVector::Zero(total_dimension(dims));
  psi(0) = 1.0;
  return PureState::from_amplitudes(dims, std::move(psi));
}

DensityMatrix gen_maximally_mixed(const Dims& dims) {
  check_dims(dims, "gen_maximally_mixed");
  const Index side = total_dimension(dims);
  return DensityMatrix::from_matrix(dims, ComplexMatrix::Identity(side, side) / static_cast<double>(side));
}

DensityMatrix gen_random_density(const Dims& dims, std::uint64_t seed) {
  check_dims(dims, "gen_random_density");
  const Index side = total_dimension(dims);
  std::mt19937_64 rng(seed);
  const ComplexMatrix g = gaussian_matrix(side, side, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho = ((rho + rho.adjoint()) / 2.0).eval();
  rho /= rho.trace().real();
  return DensityMatrix::from_matrix(dims, std::move(rho));
}

PureState gen_random_pure(const Dims& dims, std::uint64_t seed) {
  check_dims(dims, "gen_random_pure");
  std::mt19937_64 rng(seed);
  ComplexVector psi = gaussian_matrix(total_dimension(dims), 1, rng).col(0);
  psi.normalize();
  return PureState::from_amplitudes(dims, std::move(psi));
}

DensityMatrix gen_random_product(const std::vector<Dims>& groups, std::uint64_t seed) {
  if (groups.empty()) throw DimensionError("gen_random_product: no subsystem groups");
  std::mt19937_64 seeder(seed);
  DensityMatrix result = gen_random_density(groups.front(), seeder());
  for (std::size_t g = 1; g < groups.size(); ++g) {
    result = tensor(result, gen_random_density(groups[g], seeder()));
  }
  return result;
}

ComplexMatrix gen_random_unitary(Index d, std::uint64_t seed) {
  if (d <= 0) throw DimensionError("gen_random_unitary: dimension must be positive");
  std::mt19937_64 rng(seed);
  const ComplexMatrix g = gaussian_matrix(d, d, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index k = 0; k < d; ++k) {
    const double magnitude = std::abs(r(k, k));
    if (magnitude > 0.0) q.col(k) *= r(k, k) / magnitude;
  }
  return q;
}

}  // namespace prodcrit
