#pragma once

// Linear algebra over truncated series through linearization: a matrix of
// series A(t) is rewritten as t^base * (A_0 + A_1 t + A_2 t^2 + ...) with
// constant matrix coefficients, and likewise for vectors.

#include <Eigen/Core>

#include <span>
#include <string>
#include <vector>

#include "snewton/series.hpp"

namespace snewton {

template <typename Scalar>
struct MatrixSeries {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  int base = 0;
  std::vector<Matrix> coeffs;
  Eigen::Index nrows = 0;
  Eigen::Index ncols = 0;

  Eigen::Index rows() const { return nrows; }
  Eigen::Index cols() const { return ncols; }
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }

  /// A_k, or a zero block past the stored coefficients.
  Matrix coeff(int k) const {
    if (k < 0 || k >= static_cast<int>(coeffs.size())) return Matrix::Zero(nrows, ncols);
    return coeffs[static_cast<std::size_t>(k)];
  }
};

template <typename Scalar>
struct VectorSeries {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  int base = 0;
  std::vector<Vector> coeffs;
  Eigen::Index size = 0;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }

  Vector coeff(int k) const {
    if (k < 0 || k >= static_cast<int>(coeffs.size())) return Vector::Zero(size);
    return coeffs[static_cast<std::size_t>(k)];
  }

  /// Component j as a scalar series accurate to `order`.
  TruncatedSeries<Scalar> component(Eigen::Index j, int order) const {
    std::vector<Scalar> c;
    c.reserve(coeffs.size());
    for (const auto& v : coeffs) c.push_back(v(j));
    return TruncatedSeries<Scalar>(base, std::move(c), order);
  }
};

using MatrixSeriesXcd = MatrixSeries<std::complex<double>>;
using VectorSeriesXcd = VectorSeries<std::complex<double>>;

/// Coefficient-wise A(t) * x(t) through degree d of the product.
template <typename Scalar>
VectorSeries<Scalar> multiply(const MatrixSeries<Scalar>& A, const VectorSeries<Scalar>& x, int d) {
  using Vector = typename VectorSeries<Scalar>::Vector;
  VectorSeries<Scalar> r;
  r.base = A.base + x.base;
  r.size = A.rows();
  r.coeffs.assign(static_cast<std::size_t>(d + 1), Vector::Zero(A.rows()));
  for (int k = 0; k <= d; ++k) {
    for (int j = 0; j <= k && j <= A.degree(); ++j) {
      if (k - j <= x.degree()) r.coeffs[static_cast<std::size_t>(k)] += A.coeffs[static_cast<std::size_t>(j)] * x.coeffs[static_cast<std::size_t>(k - j)];
    }
  }
  return r;
}

using SeriesMatrix = std::vector<std::vector<Series>>;

/// Series of matrices from a matrix of series. The base is the lowest
/// exponent present; the coefficient count follows the smallest entry order.
MatrixSeriesXcd linearize(const SeriesMatrix& J);

/// Series of vectors from a vector of series.
VectorSeriesXcd linearize(std::span<const Series> v);

/// sigma_min / sigma_max, with sigma_min the n-th singular value of an m x n
/// matrix (0 when m < n).
double reciprocal_condition(const Eigen::MatrixXcd& A);

/// Singular values above tol * sigma_max.
int numeric_rank(const Eigen::MatrixXcd& A, double tol);

/// Orthonormal basis of the numerical null space (diagnostic).
Eigen::MatrixXcd null_space(const Eigen::MatrixXcd& A, double tol);

/// Solves A_0 x_k = b_k - A_1 x_{k-1} - ... - A_k x_0 for k = 0..d with one
/// factorization of A_0 (LU when square, Householder QR in the least squares
/// sense when A_0 is tall with full column rank). Throws
/// SingularLeadingBlock when rcond(A_0) <= rcond_threshold.
VectorSeriesXcd staggered_solve(const MatrixSeriesXcd& A, const VectorSeriesXcd& b, int d,
                                double rcond_threshold = 1e-8);

/// Block lower-triangular Toeplitz matrix with A_k on the k-th block
/// subdiagonal, (d+1) block rows and columns.
Eigen::MatrixXcd assemble_block(const MatrixSeriesXcd& A, int d);

/// Stacks b_0..b_d, zero padded.
Eigen::VectorXcd stack(const VectorSeriesXcd& b, int d);

/// One column step of the echelon reduction: swap columns `column` and
/// `swapped_with` (Q_k), then subtract multipliers(c) times column `column`
/// from column `column` + 1 + c (U_k).
struct ColumnOp {
  int column = 0;
  int swapped_with = 0;
  Eigen::VectorXcd multipliers;
};

/// L = P A Q_1 U_1 ... Q_r U_r with L lower triangular in echelon form:
/// numerically zero rows on top, pivot row indices increasing with the column
/// index, exact zeros to the right of every pivot and zero columns last.
struct EchelonDecomposition {
  Eigen::MatrixXcd L;
  std::vector<int> row_perm;  // row i of L comes from row row_perm[i] of A
  std::vector<ColumnOp> colops;
  std::vector<int> pivot_rows;  // pivot row of column k, k < rank
  int rank = 0;

  /// Applies P then every (Q_k, U_k) in order, i.e. computes P M Q_1 U_1 ...
  Eigen::MatrixXcd reduce(const Eigen::MatrixXcd& M) const;

  /// x = Q_1 U_1 ... Q_r U_r y
  Eigen::VectorXcd apply_column_ops(Eigen::VectorXcd y) const;
};

/// Entries below zero_tol * max|A| are treated as zero.
EchelonDecomposition echelon_decompose(const Eigen::MatrixXcd& A, double zero_tol = 1e-12);

enum class EchelonMode {
  /// Forward substitution through the pivot rows, free variables zero.
  /// Inconsistent non-pivot rows are left unsatisfied, so the equations
  /// with the lowest row index always hold exactly.
  Graded,
  /// On inconsistency, minimize the full residual over the pivot columns.
  LeastSquares,
};

struct EchelonSolution {
  Eigen::VectorXcd x;
  bool exact = true;
};

EchelonSolution echelon_solve(const EchelonDecomposition& E, const Eigen::VectorXcd& rhs,
                              EchelonMode mode = EchelonMode::Graded);

struct BlockSolution {
  VectorSeriesXcd x;
  bool exact = true;
};

struct BlockSolveOptions {
  /// Reuse the echelon form of a regular square A_0 on every diagonal block.
  bool use_structure = true;
  double rcond_threshold = 1e-8;
  EchelonMode mode = EchelonMode::Graded;
};

/// Solves the Hermite-Laurent block system for x_0..x_d; x has base
/// b.base - A.base.
BlockSolution block_solve(const MatrixSeriesXcd& A, const VectorSeriesXcd& b, int d,
                          const BlockSolveOptions& opts = {});

/// Plain-text grid, one matrix row per line.
std::string dump_grid(const Eigen::MatrixXcd& M);

}  // namespace snewton
