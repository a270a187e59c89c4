#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace prodcrit {

using Complex = std::complex<double>;
using Index = Eigen::Index;

/// Dense complex matrix. Storage is Eigen's default column-major layout:
/// entry (i, j) of an r x c matrix lives at offset j * r + i. Nothing in the
/// library relies on that coincidence; vec/realign are written as index maps.
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Default relative threshold for numerical rank: sigma_i counts iff sigma_i > tol * sigma_1.
inline constexpr double kDefaultRankTolerance = 1e-8;

/// Thin SVD: A = sum_i singular_values[i] * left.col(i) * right.col(i)^dagger.
struct SvdResult {
  ComplexMatrix left;
  RealVector singular_values;  // nonincreasing, >= 0
  ComplexMatrix right;
};

struct OperatorSchmidtTerm {
  double weight;        // sigma_i
  ComplexMatrix left;   // m x m, vec(left) = sqrt(sigma_i) u_i
  ComplexMatrix right;  // n x n, vec(right) = sqrt(sigma_i) conj(v_i)
};

/// Z = sum_i left_i (x) right_i, obtained from the SVD of realign(Z).
struct SchmidtOperatorDecomposition {
  Index m = 0;
  Index n = 0;
  std::vector<OperatorSchmidtTerm> terms;

  /// Sum of left_i (x) right_i; the mn x mn zero matrix when there are no terms.
  ComplexMatrix reconstruct() const;
};

/// Column-stacking: element j * rows + i of the result is x(i, j).
ComplexVector vec(const ComplexMatrix& x);

/// Inverse of vec. Throws DimensionError unless v.size() == rows * cols.
ComplexMatrix unvec(const ComplexVector& v, Index rows, Index cols);

/// Realignment of an (mn x mn) matrix viewed as an m x m grid of n x n blocks.
///
/// Row k = j * m + i of the m^2 x n^2 result is vec(Z_ij)^T, where Z_ij is the
/// block at block-row i and block-column j (0-based). Equivalently
///
///   realign(Z)(j*m + i, b*n + a) = Z(i*n + a, j*n + b).
///
/// With this ordering realign(X (x) Y) = vec(X) vec(Y)^T.
ComplexMatrix realign(const ComplexMatrix& z, Index m, Index n);

/// Kronecker product.
ComplexMatrix kron(const ComplexMatrix& x, const ComplexMatrix& y);

/// Thin SVD with singular values sorted nonincreasing. Throws NumericalError on NaN/Inf.
SvdResult svd(const ComplexMatrix& a);

/// Number of sigma_i with sigma_i > rel_tol * sigma_1; 0 when sigma_1 == 0.
/// Throws ContractError if sigmas are not nonincreasing or rel_tol is outside (0, 1).
std::size_t numerical_rank(std::span<const double> sigmas, double rel_tol = kDefaultRankTolerance);
std::size_t numerical_rank(const RealVector& sigmas, double rel_tol = kDefaultRankTolerance);

SchmidtOperatorDecomposition schmidt_operator_decomposition(
    const ComplexMatrix& z, Index m, Index n, double rel_tol = kDefaultRankTolerance);

/// max_ij |A(i,j) - conj(A(j,i))|. Throws DimensionError for non-square input.
double hermitian_error(const ComplexMatrix& a);

/// Smallest eigenvalue of the Hermitian part (A + A^dagger) / 2.
double psd_min_eigenvalue(const ComplexMatrix& a);

/// Eigenvalues of the Hermitian part, ascending.
RealVector hermitian_eigenvalues(const ComplexMatrix& a);

double frobenius_norm(const ComplexMatrix& a);

bool all_finite(const ComplexMatrix& a);

}  // namespace prodcrit
