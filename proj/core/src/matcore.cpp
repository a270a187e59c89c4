#include "prodcrit/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "prodcrit/error.hpp"

namespace prodcrit {

namespace {

void require_square(const ComplexMatrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw DimensionError(std::string(what) + ": expected a square matrix, got " +
                         std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

}  // namespace

bool all_finite(const ComplexMatrix& a) {
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      const Complex z = a(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
  }
  return true;
}

ComplexVector vec(const ComplexMatrix& x) {
  const Index rows = x.rows();
  ComplexVector out(rows * x.cols());
  for (Index j = 0; j < x.cols(); ++j) {
    for (Index i = 0; i < rows; ++i) out(j * rows + i) = x(i, j);
  }
  return out;
}

ComplexMatrix unvec(const ComplexVector& v, Index rows, Index cols) {
  if (rows < 0 || cols < 0 || v.size() != rows * cols) {
    throw DimensionError("unvec: vector of length " + std::to_string(v.size()) +
                         " cannot be reshaped to " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
  ComplexMatrix out(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) out(i, j) = v(j * rows + i);
  }
  return out;
}

ComplexMatrix realign(const ComplexMatrix& z, Index m, Index n) {
  if (m <= 0 || n <= 0) throw DimensionError("realign: block counts must be positive");
  require_square(z, "realign");
  if (z.rows() != m * n) {
    throw DimensionError("realign: matrix side " + std::to_string(z.rows()) +
                         " is not m*n = " + std::to_string(m * n));
  }
  ComplexMatrix out(m * m, n * n);
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < m; ++i) {
      const Index row = j * m + i;
      for (Index b = 0; b < n; ++b) {
        for (Index a = 0; a < n; ++a) out(row, b * n + a) = z(i * n + a, j * n + b);
      }
    }
  }
  return out;
}

ComplexMatrix kron(const ComplexMatrix& x, const ComplexMatrix& y) {
  ComplexMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Index j = 0; j < x.cols(); ++j) {
    for (Index i = 0; i < x.rows(); ++i) {
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    }
  }
  return out;
}

SvdResult svd(const ComplexMatrix& a) {
  if (!all_finite(a)) throw NumericalError("svd: input contains NaN or Inf");
  SvdResult result;
  if (a.size() == 0) {
    result.left = ComplexMatrix(a.rows(), 0);
    result.right = ComplexMatrix(a.cols(), 0);
    return result;
  }
  Eigen::BDCSVD<ComplexMatrix> solver(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (solver.info() != Eigen::Success) throw NumericalError("svd: decomposition did not converge");
  // Eigen already returns nonincreasing values; the sort is kept so the
  // contract does not hinge on a backend detail.
  const RealVector& s = solver.singularValues();
  std::vector<Index> order(static_cast<std::size_t>(s.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index l, Index r) { return s(l) > s(r); });

  result.singular_values.resize(s.size());
  result.left.resize(a.rows(), s.size());
  result.right.resize(a.cols(), s.size());
  for (Index k = 0; k < s.size(); ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    result.singular_values(k) = std::max(0.0, s(src));
    result.left.col(k) = solver.matrixU().col(src);
    result.right.col(k) = solver.matrixV().col(src);
  }
  return result;
}

std::size_t numerical_rank(std::span<const double> sigmas, double rel_tol) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
    throw ContractError("numerical_rank: rel_tol must lie in (0, 1)");
  }
  for (std::size_t k = 0; k < sigmas.size(); ++k) {
    if (!(sigmas[k] >= 0.0)) throw ContractError("numerical_rank: singular values must be >= 0");
    if (k > 0 && sigmas[k] > sigmas[k - 1]) {
      throw ContractError("numerical_rank: singular values must be nonincreasing");
    }
  }
  if (sigmas.empty() || sigmas[0] == 0.0) return 0;
  const double threshold = rel_tol * sigmas[0];
  return static_cast<std::size_t>(
      std::count_if(sigmas.begin(), sigmas.end(), [&](double s) { return s > threshold; }));
}

std::size_t numerical_rank(const RealVector& sigmas, double rel_tol) {
  return numerical_rank(std::span<const double>(sigmas.data(), static_cast<std::size_t>(sigmas.size())),
                        rel_tol);
}

SchmidtOperatorDecomposition schmidt_operator_decomposition(const ComplexMatrix& z, Index m, Index n,
                                                            double rel_tol) {
  const SvdResult decomposition = svd(realign(z, m, n));
  const std::size_t rank = numerical_rank(decomposition.singular_values, rel_tol);

  SchmidtOperatorDecomposition out;
  out.m = m;
  out.n = n;
  out.terms.reserve(rank);
  for (Index k = 0; k < static_cast<Index>(rank); ++k) {
    const double sigma = decomposition.singular_values(k);
    const double root = std::sqrt(sigma);
    out.terms.push_back({sigma,
                         unvec(root * decomposition.left.col(k), m, m),
                         unvec(root * decomposition.right.col(k).conjugate(), n, n)});
  }
  return out;
}

ComplexMatrix SchmidtOperatorDecomposition::reconstruct() const {
  ComplexMatrix sum = ComplexMatrix::Zero(m * n, m * n);
  for (const auto& term : terms) sum += kron(term.left, term.right);
  return sum;
}

double hermitian_error(const ComplexMatrix& a) {
  require_square(a, "hermitian_error");
  double worst = 0.0;
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i <= j; ++i) worst = std::max(worst, std::abs(a(i, j) - std::conj(a(j, i))));
  }
  return worst;
}

RealVector hermitian_eigenvalues(const ComplexMatrix& a) {
  require_square(a, "hermitian_eigenvalues");
  if (!all_finite(a)) throw NumericalError("hermitian_eigenvalues: input contains NaN or Inf");
  const ComplexMatrix hermitian_part = (a + a.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("hermitian_eigenvalues: eigensolver did not converge");
  }
  return solver.eigenvalues();
}

double psd_min_eigenvalue(const ComplexMatrix& a) {
  if (a.size() == 0) throw DimensionError("psd_min_eigenvalue: empty matrix");
  return hermitian_eigenvalues(a)(0);
}

double frobenius_norm(const ComplexMatrix& a) { return a.norm(); }

}  // namespace prodcrit
